//! Multivariate division.

use super::monomial::{Monomial, MonomialOrder};
use super::poly::Poly;
use super::Rational;

/// Divides `p` by `basis`, returning the quotients and the remainder.
///
/// `p == sum(q_i * basis_i) + r` holds exactly and no term of `r` is
/// divisible by the leading monomial of any nonzero basis element.
pub fn divide(p: &Poly, basis: &[Poly], order: MonomialOrder) -> (Vec<Poly>, Poly) {
    let leads: Vec<Option<(Monomial, Rational)>> = basis
        .iter()
        .map(|b| b.leading_term(order).map(|(m, c)| (m.clone(), c.clone())))
        .collect();
    let mut quotients = vec![Poly::zero(); basis.len()];
    let mut rest = p.clone();
    let mut remainder = Poly::zero();
    while let Some((m, c)) = rest.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        let hit = leads
            .iter()
            .enumerate()
            .find_map(|(i, lt)| lt.as_ref().filter(|(lm, _)| lm.divides(&m)).map(|lt| (i, lt)));
        match hit {
            Some((i, (lm, lc))) => {
                let factor_c = &c / lc;
                let factor_m = lm.quotient_of(&m);
                rest = &rest - &basis[i].mul_term(&factor_c, &factor_m);
                quotients[i].add_term(factor_m, factor_c);
            }
            None => {
                rest.add_term(m.clone(), -c.clone());
                remainder.add_term(m, c);
            }
        }
    }
    (quotients, remainder)
}

/// Normal form of `p` modulo `basis`.
pub fn reduce(p: &Poly, basis: &[Poly], order: MonomialOrder) -> Poly {
    let basis: Vec<Poly> = basis.iter().filter(|b| !b.is_zero()).cloned().collect();
    divide(p, &basis, order).1
}

/// True when no term of `p` is divisible by a leading monomial of `basis`.
pub fn is_reduced_wrt(p: &Poly, basis: &[Poly], order: MonomialOrder) -> bool {
    let leads: Vec<Monomial> = basis
        .iter()
        .filter_map(|b| b.leading_term(order).map(|(m, _)| m.clone()))
        .collect();
    p.terms().all(|(m, _)| !leads.iter().any(|l| l.divides(m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, Var};

    fn x() -> Poly {
        Poly::var(Var::ALPHA)
    }
    fn y() -> Poly {
        Poly::var(Var::BETA)
    }

    #[test]
    fn multiple_of_generator_reduces_to_zero() {
        let p = &x().pow(2) * &y();
        assert!(reduce(&p, &[x()], MonomialOrder::Grevlex).is_zero());
    }

    #[test]
    fn kill_alpha_terms() {
        let p = &x().pow(2) + &y().pow(2);
        assert_eq!(reduce(&p, &[x()], MonomialOrder::Grevlex), y().pow(2));
    }

    #[test]
    fn substitute_x_equals_y() {
        // x^2 + y^2 - 1 modulo x - y under lex x > y is 2y^2 - 1
        let p = &(&x().pow(2) + &y().pow(2)) - &Poly::one();
        let r = reduce(&p, &[&x() - &y()], MonomialOrder::Lex);
        assert_eq!(r, &y().pow(2).scale(&int(2)) - &Poly::one());
    }

    #[test]
    fn quotients_reconstruct() {
        let p = &(&x().pow(3) * &y()) + &(&y().pow(2) - &x());
        let basis = vec![&(&x() * &y()) - &Poly::one(), &y().pow(2) - &x()];
        let (q, r) = divide(&p, &basis, MonomialOrder::Grevlex);
        let back = q.iter().zip(&basis).fold(r.clone(), |acc, (qi, bi)| &acc + &(qi * bi));
        assert_eq!(back, p);
        assert!(is_reduced_wrt(&r, &basis, MonomialOrder::Grevlex));
    }
}
