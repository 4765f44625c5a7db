use std::cmp::Ordering;

use super::var::{Var, VarSet};

/// Exponent vector indexed by the variable universe.
///
/// Trailing zero exponents are never stored, so two equal monomials always
/// have identical vectors regardless of how many auxiliary variables exist.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u16) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut exps = vec![0; v.index() + 1];
        exps[v.index()] = e;
        Monomial(exps)
    }

    pub fn from_exponents(mut exps: Vec<u16>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn exponent(&self, v: Var) -> u16 {
        self.0.get(v.index()).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn vars(&self) -> VarSet {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| Var(i as u16))
            .collect()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= other.0.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut exps = long.0.clone();
        for (e, s) in exps.iter_mut().zip(&short.0) {
            *e += s;
        }
        Monomial(exps)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        let mut exps = other.0.clone();
        for (e, s) in exps.iter_mut().zip(&self.0) {
            *e -= s;
        }
        Monomial::from_exponents(exps)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let exps = (0..n)
            .map(|i| {
                let a = self.0.get(i).copied().unwrap_or(0);
                let b = other.0.get(i).copied().unwrap_or(0);
                a.max(b)
            })
            .collect();
        Monomial(exps)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Removes `v`, returning its exponent and the remaining monomial.
    pub fn split_var(&self, v: Var) -> (u16, Monomial) {
        let e = self.exponent(v);
        if e == 0 {
            return (0, self.clone());
        }
        let mut exps = self.0.clone();
        exps[v.index()] = 0;
        (e, Monomial::from_exponents(exps))
    }

    fn degree_in(&self, set: VarSet) -> u32 {
        self.0
            .iter()
            .enumerate()
            .filter(|(i, _)| set.contains(Var(*i as u16)))
            .map(|(_, &e)| e as u32)
            .sum()
    }
}

/// Monomial orders used for normal forms and Gröbner bases.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum MonomialOrder {
    /// Pure lexicographic with `alpha > beta > ... > lbar > t1 > t2 > ...`.
    Lex,
    /// Graded reverse lexicographic.
    #[default]
    Grevlex,
    /// Block order: the variables in the set are compared first (grevlex
    /// inside the block) and are therefore eliminated; ties are broken by
    /// grevlex on the remaining variables.
    Eliminate(VarSet),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => lex(a, b),
            MonomialOrder::Grevlex => grevlex(a, b, None),
            MonomialOrder::Eliminate(block) => grevlex(a, b, Some((*block, true)))
                .then_with(|| grevlex(a, b, Some((*block, false)))),
        }
    }
}

fn lex(a: &Monomial, b: &Monomial) -> Ordering {
    let n = a.0.len().max(b.0.len());
    for i in 0..n {
        let x = a.0.get(i).copied().unwrap_or(0);
        let y = b.0.get(i).copied().unwrap_or(0);
        match x.cmp(&y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Grevlex restricted to a block (`inside == true`) or its complement.
fn grevlex(a: &Monomial, b: &Monomial, restrict: Option<(VarSet, bool)>) -> Ordering {
    let keep = |i: usize| match restrict {
        None => true,
        Some((set, inside)) => set.contains(Var(i as u16)) == inside,
    };
    let (da, db) = match restrict {
        None => (a.total_degree(), b.total_degree()),
        Some((set, true)) => (a.degree_in(set), b.degree_in(set)),
        Some((set, false)) => (
            a.total_degree() - a.degree_in(set),
            b.total_degree() - b.degree_in(set),
        ),
    };
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    let n = a.0.len().max(b.0.len());
    for i in (0..n).rev() {
        if !keep(i) {
            continue;
        }
        let x = a.0.get(i).copied().unwrap_or(0);
        let y = b.0.get(i).copied().unwrap_or(0);
        match x.cmp(&y) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        assert_eq!(m(&[1, 0, 0]), m(&[1]));
        assert!(m(&[0, 0]).is_one());
    }

    #[test]
    fn lex_prefers_earlier_variables() {
        // alpha > beta^5
        assert_eq!(MonomialOrder::Lex.cmp(&m(&[1]), &m(&[0, 5])), Ordering::Greater);
    }

    #[test]
    fn grevlex_degree_then_reverse() {
        let o = MonomialOrder::Grevlex;
        // beta^5 > alpha (degree)
        assert_eq!(o.cmp(&m(&[0, 5]), &m(&[1])), Ordering::Greater);
        // alpha*beta*gamma vs alpha^2*delta: last variable delta present in the second -> smaller
        assert_eq!(o.cmp(&m(&[1, 1, 1]), &m(&[2, 0, 0, 1])), Ordering::Greater);
        // alpha^2 > alpha*beta > beta^2
        assert_eq!(o.cmp(&m(&[2]), &m(&[1, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 1]), &m(&[0, 2])), Ordering::Greater);
    }

    #[test]
    fn elimination_block_dominates() {
        let block: VarSet = [Var::BETA].into_iter().collect();
        let o = MonomialOrder::Eliminate(block);
        // beta > alpha^9
        assert_eq!(o.cmp(&m(&[0, 1]), &m(&[9])), Ordering::Greater);
    }

    #[test]
    fn division_helpers() {
        let a = m(&[1, 2]);
        let b = m(&[2, 3, 1]);
        assert!(a.divides(&b));
        assert_eq!(a.quotient_of(&b), m(&[1, 1, 1]));
        assert_eq!(a.lcm(&m(&[0, 0, 4])), m(&[1, 2, 4]));
        assert!(m(&[1]).is_coprime(&m(&[0, 1])));
    }
}
