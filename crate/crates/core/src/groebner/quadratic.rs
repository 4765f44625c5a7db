//! Positive-definite quadratic forms with exact rational coefficients.

use num_traits::{Signed, Zero};

use crate::poly::{Monomial, Poly, Rational, Var, VarSet};

/// Symmetric coefficient matrix of `p` as a quadratic form in `vars`, or
/// `None` unless `p` is homogeneous of degree two in exactly those
/// variables with constant coefficients.
pub fn quadratic_form_matrix(p: &Poly, vars: &[Var]) -> Option<Vec<Vec<Rational>>> {
    let set: VarSet = vars.iter().copied().collect();
    if set.len() != vars.len() || !p.is_form_of_degree(set, 2) {
        return None;
    }
    let n = vars.len();
    let mut q = vec![vec![Rational::zero(); n]; n];
    let two = Rational::from_integer(2.into());
    for i in 0..n {
        q[i][i] = p.coefficient(&Monomial::var_pow(vars[i], 2));
        for j in i + 1..n {
            let m = Monomial::var(vars[i]).mul(&Monomial::var(vars[j]));
            let c = p.coefficient(&m) / &two;
            q[i][j] = c.clone();
            q[j][i] = c;
        }
    }
    Some(q)
}

/// Leading principal minors of a square matrix, by unpivoted Gaussian
/// elimination in exact arithmetic.
pub fn leading_principal_minors(m: &[Vec<Rational>]) -> Vec<Rational> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut minors = Vec::with_capacity(n);
    let mut det = Rational::from_integer(1.into());
    for k in 0..n {
        // No pivoting: the k-th pivot of unpivoted elimination is the ratio
        // of consecutive leading minors.
        if a[k][k].is_zero() {
            minors.push(Rational::zero());
            // remaining minors are computed directly
            for size in k + 2..=n {
                minors.push(determinant(&m[..size].iter().map(|r| r[..size].to_vec()).collect::<Vec<_>>()));
            }
            return minors;
        }
        det = &det * &a[k][k];
        minors.push(det.clone());
        for i in k + 1..n {
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let d = &f * &a[k][j];
                a[i][j] = &a[i][j] - &d;
            }
        }
    }
    minors
}

/// Determinant with partial pivoting on nonzero entries.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::from_integer(1.into());
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det = &det * &a[k][k];
        for i in k + 1..n {
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let d = &f * &a[k][j];
                a[i][j] = &a[i][j] - &d;
            }
        }
    }
    det
}

/// Solution of `m x = rhs` for a nonsingular square `m`, by Gauss-Jordan
/// elimination with row pivoting.
pub fn solve_linear(m: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.iter().zip(rhs).map(|(r, b)| r.iter().cloned().chain([b.clone()]).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let d = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &d;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n].clone()).collect())
}

/// Sylvester's criterion on the form `p` in `vars`.
pub fn pd_quadratic_check(p: &Poly, vars: &[Var]) -> bool {
    match quadratic_form_matrix(p, vars) {
        None => false,
        Some(q) => leading_principal_minors(&q).iter().all(|d| d.is_positive()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{poly, rat};

    #[test]
    fn linear_solve() {
        let m = vec![vec![rat(0, 1), rat(1, 1)], vec![rat(2, 1), rat(1, 1)]];
        assert_eq!(solve_linear(&m, &[rat(3, 1), rat(5, 1)]), Some(vec![rat(1, 1), rat(3, 1)]));
        let sing = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(2, 1), rat(2, 1)]];
        assert_eq!(solve_linear(&sing, &[rat(0, 1), rat(0, 1)]), None);
    }

    #[test]
    fn sylvester_examples() {
        let p = poly("alpha^2 + lbar*alpha + lbar^2");
        let q = quadratic_form_matrix(&p, &[Var::ALPHA, Var::LBAR]).unwrap();
        assert_eq!(leading_principal_minors(&q), vec![rat(1, 1), rat(3, 4)]);
        assert!(pd_quadratic_check(&p, &[Var::ALPHA, Var::LBAR]));
        assert!(pd_quadratic_check(&poly("2*alpha^2 + beta^2"), &[Var::ALPHA, Var::BETA]));
        assert!(!pd_quadratic_check(&poly("alpha^2 - beta^2"), &[Var::ALPHA, Var::BETA]));
    }

    #[test]
    fn shape_requirements() {
        // not homogeneous
        assert!(!pd_quadratic_check(&poly("alpha^2 + 1"), &[Var::ALPHA]));
        // a listed variable that does not occur is a zero diagonal entry
        assert!(!pd_quadratic_check(&poly("alpha^2"), &[Var::ALPHA, Var::BETA]));
        // a variable outside the list
        assert!(!pd_quadratic_check(&poly("alpha^2 + beta^2"), &[Var::ALPHA]));
        // semidefinite
        assert!(!pd_quadratic_check(&poly("alpha^2 + 2*alpha*beta + beta^2"), &[Var::ALPHA, Var::BETA]));
        assert!(pd_quadratic_check(&poly("3*gamma^2"), &[Var::GAMMA]));
        assert!(!pd_quadratic_check(&poly("-gamma^2"), &[Var::GAMMA]));
    }

    #[test]
    fn minors_with_zero_pivot() {
        let m = vec![
            vec![rat(0, 1), rat(1, 1)],
            vec![rat(1, 1), rat(0, 1)],
        ];
        assert_eq!(leading_principal_minors(&m), vec![rat(0, 1), rat(-1, 1)]);
    }
}
