//! Floating-point cross-check of the exact pipeline.
//!
//! Everything downstream of the structure constants is recomputed here in
//! `f64` with matrices: connection operators `A_i = ∇_{e_i}`, the
//! corrections through `∇J`, curvature as a commutator and Ricci as a trace.
//! None of it goes through [`Poly`](crate::poly::Poly).

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::certify::{find_witness_for, SolutionFamily, WitnessSearch};
use crate::connection::ConnectionKind;
use crate::lie::LiePresentation;
use crate::poly::{Rational, Var};
use crate::soliton::SolitonSystem;

/// Residual tolerance of the oracle.
pub const TOLERANCE: f64 = 1e-9;

type M3 = [[f64; 3]; 3];

const G: [f64; 3] = [1.0, 1.0, -1.0];
const J: M3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]];

fn mat_mul(a: &M3, b: &M3) -> M3 {
    std::array::from_fn(|r| std::array::from_fn(|c| (0..3).map(|m| a[r][m] * b[m][c]).sum()))
}

fn mat_sub(a: &M3, b: &M3) -> M3 {
    std::array::from_fn(|r| std::array::from_fn(|c| a[r][c] - b[r][c]))
}

fn mat_vec(a: &M3, v: &[f64; 3]) -> [f64; 3] {
    std::array::from_fn(|r| (0..3).map(|m| a[r][m] * v[m]).sum())
}

fn unit(i: usize) -> [f64; 3] {
    std::array::from_fn(|k| if k == i { 1.0 } else { 0.0 })
}

/// `bracket[i][j][k]`: coefficient of `e_k` in `[e_i, e_j]`.
fn brackets(lie: &LiePresentation, value: &dyn Fn(Var) -> f64) -> [[[f64; 3]; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| std::array::from_fn(|k| lie.structure(i, j)[k].eval_f64(value))))
}

/// Operators `A_i` with `A_i e_j = ∇_{e_i} e_j` (column `j`).
fn connection_operators(c: &[[[f64; 3]; 3]; 3], kind: ConnectionKind, lbar: f64) -> [M3; 3] {
    // Koszul: 2 g(∇_i e_j, e_k) = g([e_i,e_j],e_k) - g([e_j,e_k],e_i) + g([e_k,e_i],e_j)
    let lc: [M3; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|k| {
            std::array::from_fn(|j| (c[i][j][k] * G[k] - c[j][k][i] * G[i] + c[k][i][j] * G[j]) / (2.0 * G[k]))
        })
    });
    // (∇_i J) = A_i J - J A_i
    let dj: [M3; 3] = std::array::from_fn(|i| mat_sub(&mat_mul(&lc[i], &J), &mat_mul(&J, &lc[i])));
    // ∇⁰_X Y = ∇_X Y - ½ (∇_X J) J Y
    let c0: [M3; 3] = std::array::from_fn(|i| {
        let corr = mat_mul(&dj[i], &J);
        std::array::from_fn(|r| std::array::from_fn(|col| lc[i][r][col] - 0.5 * corr[r][col]))
    });
    let mut ops = match kind.base() {
        ConnectionKind::C0 => c0,
        ConnectionKind::C1 => {
            // ∇¹_X Y = ∇⁰_X Y - ¼ ((∇_Y J) J X - (∇_{JY} J) X)
            std::array::from_fn(|i| {
                let mut a = c0[i];
                for j in 0..3 {
                    let jx = mat_vec(&J, &unit(i));
                    let jy = mat_vec(&J, &unit(j));
                    let t1 = mat_vec(&dj[j], &jx);
                    let djy: M3 = std::array::from_fn(|r| std::array::from_fn(|col| (0..3).map(|m| jy[m] * dj[m][r][col]).sum()));
                    let t2 = mat_vec(&djy, &unit(i));
                    for r in 0..3 {
                        a[r][j] -= 0.25 * (t1[r] - t2[r]);
                    }
                }
                a
            })
        }
        _ => lc,
    };
    if kind.is_perturbed() {
        ops[2][2][2] += lbar;
    }
    ops
}

/// The six soliton residuals at a point, in upper-triangle order.
pub fn soliton_residuals(lie: &LiePresentation, kind: ConnectionKind, value: &dyn Fn(Var) -> f64) -> [f64; 6] {
    let c = brackets(lie, value);
    let a = connection_operators(&c, kind, value(Var::LBAR));
    // R(e_i,e_j) = A_i A_j - A_j A_i - Σ_m c_ij^m A_m
    let r: [[M3; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let comm = mat_sub(&mat_mul(&a[i], &a[j]), &mat_mul(&a[j], &a[i]));
            std::array::from_fn(|row| std::array::from_fn(|col| comm[row][col] - (0..3).map(|m| c[i][j][m] * a[m][row][col]).sum::<f64>()))
        })
    });
    // ρ(X,Y) = tr(Z ↦ R(Z,X)Y)
    let rho: M3 = std::array::from_fn(|x| std::array::from_fn(|y| (0..3).map(|z| r[z][x][z][y]).sum()));
    let v = [value(Var::L1), value(Var::L2), value(Var::L3)];
    let nv: [[f64; 3]; 3] = std::array::from_fn(|j| mat_vec(&a[j], &v));
    let lam = value(Var::LAM);
    crate::curvature::UPPER.map(|(j, k)| {
        let lie_g = G[k] * nv[j][k] + G[j] * nv[k][j];
        let sym = rho[j][k] + rho[k][j];
        let metric = if j == k { G[j] } else { 0.0 };
        lie_g + sym + 2.0 * lam * metric
    })
}

/// Outcome of [`sample_numeric_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleReport {
    pub group: String,
    pub kind: ConnectionKind,
    pub seed: u64,
    pub points_requested: usize,
    /// Family points actually drawn.
    pub points: usize,
    /// Largest `|residual|` over family points.
    pub max_residual: f64,
    /// Largest difference between the exact and floating residuals at
    /// unconstrained random points.
    pub max_disagreement: f64,
    /// Families (per case branch) for which no point could be drawn.
    pub failures: Vec<String>,
}

impl SampleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.max_residual < TOLERANCE && self.max_disagreement < TOLERANCE
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-10i64..=10).into(), rng.gen_range(1i64..=10).into())
}

/// Draws `points` witness points, round robin over families and case
/// branches, and evaluates the soliton residuals through the floating
/// pipeline.  The same number of unconstrained points compares the
/// floating residuals with the exact equations.
pub fn sample_numeric_check(
    lie: &LiePresentation,
    kind: ConnectionKind,
    families: &[SolutionFamily],
    points: usize,
    seed: u64,
) -> SampleReport {
    let branches = SolitonSystem::branches(lie, kind);
    let mut report = SampleReport {
        group: lie.name.clone(),
        kind,
        seed,
        points_requested: points,
        points: 0,
        max_residual: 0.0,
        max_disagreement: 0.0,
        failures: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..points {
        let (fix, system) = &branches[i % branches.len()];
        let eval_point = |values: &HashMap<Var, f64>| {
            let fixed: HashMap<Var, f64> = fix.iter().map(|(v, c)| (*v, num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN))).collect();
            let value = |v: Var| values.get(&v).or_else(|| fixed.get(&v)).copied().unwrap_or(0.0);
            soliton_residuals(lie, kind, &value)
        };
        // unconstrained comparison with the exact equations
        let exact_point: HashMap<Var, Rational> = system.symbols().iter().map(|v| (v, random_rational(&mut rng))).collect();
        let float_point: HashMap<Var, f64> = exact_point.iter().map(|(v, c)| (*v, num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN))).collect();
        let floating = eval_point(&float_point);
        for (e, f) in system.equations.iter().zip(floating) {
            let exact: Rational = e.eval(|v| exact_point[&v].clone());
            let diff = (num_traits::ToPrimitive::to_f64(&exact).unwrap_or(f64::NAN) - f).abs();
            report.max_disagreement = report.max_disagreement.max(if diff.is_nan() { f64::INFINITY } else { diff });
        }
        if families.is_empty() {
            continue;
        }
        let family = families[(i / branches.len()) % families.len()].fix(fix);
        let search = WitnessSearch { seed: seed.wrapping_add(i as u64), ..WitnessSearch::default() };
        match find_witness_for(system, &family, search) {
            Ok(Some(w)) => {
                let values: HashMap<Var, f64> = w.point.iter().map(|(v, x)| (*v, x.to_f64())).collect();
                let worst = eval_point(&values).iter().fold(0.0f64, |m, r| m.max(if r.is_nan() { f64::INFINITY } else { r.abs() }));
                report.max_residual = report.max_residual.max(worst);
                report.points += 1;
            }
            _ => {
                let name = format!("{} {}", family.label, crate::certify::proof::fix_key(fix).iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(","));
                let name = name.trim().to_string();
                if !report.failures.contains(&name) {
                    report.failures.push(name);
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{builtin, builtin_ids, GroupId};
    use crate::poly::Bindings;

    fn strings(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn agrees_with_exact_equations() {
        for id in builtin_ids() {
            let lie = builtin(id);
            for kind in ConnectionKind::SOLITON {
                let r = sample_numeric_check(&lie, kind, &[], 5, 7);
                assert!(r.max_disagreement < TOLERANCE, "{id} {kind}: {}", r.max_disagreement);
            }
        }
    }

    fn at(vals: &[(Var, f64)]) -> impl Fn(Var) -> f64 + '_ {
        move |v| vals.iter().find(|(w, _)| *w == v).map_or(0.0, |(_, x)| *x)
    }

    #[test]
    fn stated_points_are_solitons() {
        let g3 = builtin(GroupId::new(3).unwrap());
        let p = [(Var::ALPHA, 1.0), (Var::BETA, 1.0), (Var::GAMMA, 2.0), (Var::L1, 0.3), (Var::L2, -1.5), (Var::L3, 0.25)];
        let r = soliton_residuals(&g3, ConnectionKind::C0, &at(&p));
        assert!(r.iter().all(|x| x.abs() < TOLERANCE), "{r:?}");
        let g1 = builtin(GroupId::new(1).unwrap());
        let p = [(Var::LBAR, 2.0), (Var::ALPHA, -2.0), (Var::L3, -2.0), (Var::LAM, 4.0)];
        let r = soliton_residuals(&g1, ConnectionKind::C2, &at(&p));
        assert!(r.iter().all(|x| x.abs() < TOLERANCE), "{r:?}");
        let bad = [(Var::LBAR, 2.0), (Var::ALPHA, -2.0), (Var::L3, -2.0), (Var::LAM, 2.0)];
        assert!(soliton_residuals(&g1, ConnectionKind::C2, &at(&bad)).iter().any(|x| x.abs() > 1.0));
    }

    #[test]
    fn family_points_have_small_residuals() {
        let lie = builtin(GroupId::new(1).unwrap());
        let f = SolutionFamily::parse(
            "i",
            &strings(&["l1 = 0", "l2 = 0", "l3 = -lbar", "alpha = -lbar", "beta = 0", "lam = lbar^2"]),
            &[],
            &[],
            &Bindings::new(),
        )
        .unwrap();
        let r = sample_numeric_check(&lie, ConnectionKind::C2, &[f], 20, 3);
        assert_eq!(r.points, 20);
        assert!(r.passed(), "{r:?}");
    }
}
