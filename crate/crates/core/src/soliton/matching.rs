//! Matching an assembled system against a reference list of equations.
//!
//! Reference systems are rescaled, drop duplicated lines, and are often
//! simplified using lines of the form `c·x = 0` (typically `lam = 0`).  The
//! matcher accounts for each of these explicitly and reports which rule
//! justified every pairing.

use std::collections::HashMap;

use crate::poly::{Poly, Rational, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchTier {
    /// `assembled = scalar · reference` exactly.
    Direct,
    /// Equal up to scalar after setting the pinned variables to zero.
    ModuloPinned,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquationMatch {
    /// Index into the assembled equations.
    pub assembled: usize,
    /// Index into the reference list.
    pub reference: usize,
    /// `assembled = scalar · reference` (after pinning for `ModuloPinned`).
    pub scalar: Rational,
    pub tier: MatchTier,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MatchReport {
    pub matches: Vec<EquationMatch>,
    /// `(index, earlier index, scalar)`: assembled equations that are scalar
    /// multiples of an earlier one.
    pub duplicates: Vec<(usize, usize, Rational)>,
    /// Assembled equations that vanish identically.
    pub zero: Vec<usize>,
    /// Variables forced to zero by an assembled equation `c·x`.
    pub pinned: Vec<Var>,
    /// Unmatched assembled equations that vanish once pinned variables are zero.
    pub implied: Vec<usize>,
    pub unmatched_assembled: Vec<usize>,
    pub unmatched_reference: Vec<usize>,
}

impl MatchReport {
    pub fn is_bijection(&self) -> bool {
        self.unmatched_assembled.is_empty() && self.unmatched_reference.is_empty()
    }

    pub fn scalar_for(&self, assembled: usize) -> Option<&Rational> {
        self.matches.iter().find(|m| m.assembled == assembled).map(|m| &m.scalar)
    }
}

fn single_variable(p: &Poly) -> Option<Var> {
    let mut it = p.terms();
    let (m, _) = it.next()?;
    if it.next().is_some() || m.total_degree() != 1 {
        return None;
    }
    m.vars().iter().next()
}

/// Pairs the assembled equations with the reference list.
///
/// Every reference equation must be matched to a distinct assembled one;
/// assembled equations may be left over only if they are zero, duplicates,
/// or implied by the pinned variables.
pub fn match_paper_system(assembled: &[Poly], reference: &[Poly]) -> MatchReport {
    let mut report = MatchReport::default();
    let mut kept: Vec<usize> = Vec::new();
    for (i, e) in assembled.iter().enumerate() {
        if e.is_zero() {
            report.zero.push(i);
            continue;
        }
        if let Some((j, c)) = kept.iter().find_map(|&j| e.equal_up_to_scalar(&assembled[j]).map(|c| (j, c))) {
            report.duplicates.push((i, j, c));
        } else {
            kept.push(i);
        }
    }
    let pinned_eqs: Vec<usize> = kept.iter().copied().filter(|&i| single_variable(&assembled[i]).is_some()).collect();
    report.pinned = pinned_eqs.iter().filter_map(|&i| single_variable(&assembled[i])).collect();
    let zeros: HashMap<Var, Poly> = report.pinned.iter().map(|&v| (v, Poly::zero())).collect();
    let pin = |p: &Poly| p.substitute(&zeros);

    // candidate edges per reference equation
    let edges: Vec<Vec<(usize, Rational, MatchTier)>> = reference
        .iter()
        .map(|r| {
            let mut out = Vec::new();
            if r.is_zero() {
                return out;
            }
            let pr = pin(r);
            for &i in &kept {
                if let Some(c) = assembled[i].equal_up_to_scalar(r) {
                    out.push((i, c, MatchTier::Direct));
                    continue;
                }
                let pe = pin(&assembled[i]);
                if !pe.is_zero() {
                    if let Some(c) = pe.equal_up_to_scalar(&pr) {
                        out.push((i, c, MatchTier::ModuloPinned));
                    }
                }
            }
            out
        })
        .collect();

    let mut search = Search {
        edges: &edges,
        kept: &kept,
        assembled,
        pinned_eqs: &pinned_eqs,
        pin: &pin,
        used: vec![false; assembled.len()],
        current: Vec::new(),
        best: None,
    };
    search.run(0);
    let (_, assignment) = search.best.expect("search always records a result");

    let mut matched = vec![false; assembled.len()];
    for (r, choice) in assignment.iter().enumerate() {
        match choice {
            Some((i, c, tier)) => {
                matched[*i] = true;
                report.matches.push(EquationMatch { assembled: *i, reference: r, scalar: c.clone(), tier: *tier });
            }
            None => report.unmatched_reference.push(r),
        }
    }
    for &i in &kept {
        if matched[i] {
            continue;
        }
        if !pinned_eqs.contains(&i) && pin(&assembled[i]).is_zero() {
            report.implied.push(i);
        } else {
            report.unmatched_assembled.push(i);
        }
    }
    report
}

type Choice = Option<(usize, Rational, MatchTier)>;

struct Search<'a, F: Fn(&Poly) -> Poly> {
    edges: &'a [Vec<(usize, Rational, MatchTier)>],
    kept: &'a [usize],
    assembled: &'a [Poly],
    pinned_eqs: &'a [usize],
    pin: &'a F,
    used: Vec<bool>,
    current: Vec<Choice>,
    /// Cost `(unmatched reference, unmatched assembled, indirect matches)`.
    best: Option<((usize, usize, usize), Vec<Choice>)>,
}

impl<F: Fn(&Poly) -> Poly> Search<'_, F> {
    fn cost(&self) -> (usize, usize, usize) {
        let unmatched_ref = self.current.iter().filter(|c| c.is_none()).count();
        let indirect = self
            .current
            .iter()
            .filter(|c| matches!(c, Some((_, _, MatchTier::ModuloPinned))))
            .count();
        let unmatched_asm = self
            .kept
            .iter()
            .filter(|&&i| {
                !self.used[i] && (self.pinned_eqs.contains(&i) || !(self.pin)(&self.assembled[i]).is_zero())
            })
            .count();
        (unmatched_ref, unmatched_asm, indirect)
    }

    fn run(&mut self, r: usize) {
        if r == self.edges.len() {
            let cost = self.cost();
            if self.best.as_ref().map_or(true, |(b, _)| cost < *b) {
                self.best = Some((cost, self.current.clone()));
            }
            return;
        }
        for k in 0..self.edges[r].len() {
            let (i, c, t) = self.edges[r][k].clone();
            if self.used[i] {
                continue;
            }
            self.used[i] = true;
            self.current.push(Some((i, c, t)));
            self.run(r + 1);
            self.current.pop();
            self.used[i] = false;
        }
        self.current.push(None);
        self.run(r + 1);
        self.current.pop();
    }
}
