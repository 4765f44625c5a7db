//! Search for infeasibility proofs.
//!
//! After saturating every declared inequation the prover alternates
//! Gröbner basis computation with a hunt for definite quadratic forms in
//! the ideal: basis elements, normal forms of the probe polynomials, and
//! elements of elimination ideals in up to three variables.  Forms with a
//! shifted centre are recentred through definitional variables.  When
//! nothing applies it splits on whether a variable vanishes.

use std::env;

use num_traits::{Signed, Zero};
use thiserror::Error;

use super::proof::{fix_key, BranchProof, InfeasibilityProof, ProofStep, PROOF_FORMAT};
use crate::connection::ConnectionKind;
use crate::groebner::{groebner_basis, pd_quadratic_check, quadratic_form_matrix, solve_linear, GroebnerLimits};
use crate::lie::LiePresentation;
use crate::poly::{reduce, Monomial, MonomialOrder, Poly, Rational, Var, VarSet};
use crate::soliton::SolitonSystem;

/// Environment variable overriding [`ProverBudget::max_pairs`].
pub const ENV_MAX_PAIRS: &str = "LORSOL_MAX_PAIRS";
/// Environment variable overriding [`ProverBudget::max_split_depth`].
pub const ENV_MAX_SPLIT_DEPTH: &str = "LORSOL_MAX_SPLIT_DEPTH";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProverBudget {
    /// Pair-queue bound for every Gröbner basis computation.
    pub max_pairs: usize,
    /// Maximal nesting of case splits.
    pub max_split_depth: usize,
    /// Largest variable subset searched with elimination orders.
    pub max_elimination_vars: usize,
}

impl Default for ProverBudget {
    fn default() -> Self {
        ProverBudget { max_pairs: 50_000, max_split_depth: 4, max_elimination_vars: 3 }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{var} must be a non-negative integer, got `{value}`")]
pub struct BudgetError {
    pub var: &'static str,
    pub value: String,
}

impl ProverBudget {
    /// Defaults overridden by the budget environment variables.
    pub fn from_env() -> Result<Self, BudgetError> {
        let mut b = ProverBudget::default();
        for (var, slot) in [(ENV_MAX_PAIRS, &mut b.max_pairs), (ENV_MAX_SPLIT_DEPTH, &mut b.max_split_depth)] {
            if let Ok(value) = env::var(var) {
                *slot = value.trim().parse().map_err(|_| BudgetError { var, value })?;
            }
        }
        Ok(b)
    }

    pub fn limits(&self) -> GroebnerLimits {
        GroebnerLimits { max_pairs: self.max_pairs }
    }
}

#[derive(Clone, Debug)]
struct State {
    gens: Vec<Poly>,
    nonzero: Vec<Poly>,
    /// Saturation variables; forms involving them are not used.
    inverses: VarSet,
}

impl State {
    fn used(&self) -> VarSet {
        self.gens.iter().chain(&self.nonzero).fold(VarSet::empty(), |s, p| s.union(p.vars()))
    }

    /// The `k` smallest auxiliary variables not yet in use.
    fn fresh(&self, k: usize) -> Vec<Var> {
        let used = self.used();
        (1..).map(Var::aux).filter(|v| !used.contains(*v)).take(k).collect()
    }

    fn apply(&mut self, step: &ProofStep) {
        let p = |s: &str| s.parse::<Poly>().expect("prover emits parseable text");
        let v = |s: &str| Var::from_name(s).expect("prover emits variable names");
        match step {
            ProofStep::Saturate { poly, fresh } => {
                self.inverses.insert(v(fresh));
                self.gens.push(&Poly::one() - &(&Poly::var(v(fresh)) * &p(poly)));
            }
            ProofStep::RealSos { vars, .. } => self.gens.extend(vars.iter().map(|x| Poly::var(v(x)))),
            ProofStep::Define { name, expr } => self.gens.push(&Poly::var(v(name)) - &p(expr)),
            _ => unreachable!("applied separately"),
        }
    }
}

/// The order in which variables are tried for case splits.
const SPLIT_ORDER: [Var; 9] = [
    Var::ALPHA, Var::BETA, Var::GAMMA, Var::DELTA, Var::L1, Var::L2, Var::L3, Var::LAM, Var::LBAR,
];

struct Prover {
    budget: ProverBudget,
    probes: Vec<Poly>,
}

fn var_list(s: VarSet) -> Vec<Var> {
    s.iter().collect()
}

fn names(vs: &[Var]) -> Vec<String> {
    vs.iter().map(|v| v.name()).collect()
}

fn subsets(items: &[Var], max: usize) -> Vec<Vec<Var>> {
    let mut out: Vec<Vec<Var>> = vec![Vec::new()];
    for &v in items {
        let extended: Vec<Vec<Var>> = out.iter().filter(|s| s.len() < max).map(|s| [s.as_slice(), &[v]].concat()).collect();
        out.extend(extended);
    }
    out.retain(|s| !s.is_empty());
    out.sort_by_key(|s| s.len());
    out
}

/// Steps proving that the real zeros of `c` force its variables (or a
/// recentred copy of them) to vanish, if `c` is definite of degree two.
fn definite_form(c: &Poly, state: &State) -> Option<Vec<ProofStep>> {
    if c.total_degree() != 2 {
        return None;
    }
    let vars = var_list(c.vars());
    if c.is_form_of_degree(c.vars(), 2) {
        let p = if pd_quadratic_check(c, &vars) { c.clone() } else { -c };
        return pd_quadratic_check(&p, &vars).then(|| vec![ProofStep::RealSos { poly: p.to_text(), vars: names(&vars) }]);
    }
    // recentre: c = (x - x0)^T Q (x - x0) + k
    let quad_of = |p: &Poly| {
        Poly::from_terms(p.terms().filter(|(m, _)| m.total_degree() == 2).map(|(m, r)| (m.clone(), r.clone())))
    };
    let c = if pd_quadratic_check(&quad_of(c), &vars) {
        c.clone()
    } else if pd_quadratic_check(&quad_of(&-c), &vars) {
        -c
    } else {
        return None;
    };
    let q = quadratic_form_matrix(&quad_of(&c), &vars)?;
    let b: Vec<Rational> = vars.iter().map(|&v| c.coefficient(&Monomial::var(v))).collect();
    let two_q: Vec<Vec<Rational>> = q.iter().map(|r| r.iter().map(|x| x * Rational::from_integer(2.into())).collect()).collect();
    let x0 = solve_linear(&two_q, &b.iter().map(|x| -x).collect::<Vec<_>>())?;
    let k = c.coefficient(&Monomial::one()) + b.iter().zip(&x0).map(|(bi, xi)| bi * xi).sum::<Rational>() / Rational::from_integer(2.into());
    if k.is_negative() {
        return None;
    }
    let shifted = x0.iter().filter(|x| !x.is_zero()).count() + usize::from(!k.is_zero());
    let mut fresh = state.fresh(shifted).into_iter();
    let mut steps = Vec::new();
    let mut ys = Vec::new();
    for (&v, x) in vars.iter().zip(&x0) {
        if x.is_zero() {
            ys.push(v);
        } else {
            let u = fresh.next()?;
            let expr = &Poly::var(v) - &Poly::constant(x.clone());
            steps.push(ProofStep::Define { name: u.name(), expr: expr.to_text() });
            ys.push(u);
        }
    }
    let mut form = Poly::zero();
    for i in 0..ys.len() {
        for j in 0..ys.len() {
            form = &form + &Poly::var(ys[i]).mul_term(&q[i][j], &Monomial::var(ys[j]));
        }
    }
    if !k.is_zero() {
        let w = fresh.next()?;
        steps.push(ProofStep::Define { name: w.name(), expr: "1".into() });
        form = &form + &Poly::term(k, Monomial::var_pow(w, 2));
        ys.push(w);
    }
    steps.push(ProofStep::RealSos { poly: form.to_text(), vars: names(&ys) });
    Some(steps)
}

impl Prover {
    fn basis(&self, gens: &[Poly], order: MonomialOrder) -> Option<Vec<Poly>> {
        groebner_basis(gens, order, self.budget.limits()).ok()
    }

    /// All definite forms reachable from the current basis, best first:
    /// forms over the group parameters and `lbar` are preferred to forms
    /// involving the soliton unknowns, and smaller forms to larger ones.
    fn find_form(&self, state: &State, gb: &[Poly]) -> Option<Vec<ProofStep>> {
        let mut seen: Vec<Poly> = Vec::new();
        let mut found: Vec<(Poly, Vec<ProofStep>)> = Vec::new();
        let mut consider = |c: Poly, seen: &mut Vec<Poly>| {
            let c = c.monic(MonomialOrder::Grevlex);
            if c.is_zero() || seen.contains(&c) || !VarSet(c.vars().0 & state.inverses.0).is_empty() {
                return;
            }
            if let Some(s) = definite_form(&c, state) {
                found.push((c.clone(), s));
            }
            seen.push(c);
        };
        for g in gb {
            consider(g.clone(), &mut seen);
        }
        for (i, p) in self.probes.iter().enumerate() {
            consider(reduce(p, gb, MonomialOrder::Grevlex), &mut seen);
            for q in &self.probes[i + 1..] {
                consider(reduce(&(p + q), gb, MonomialOrder::Grevlex), &mut seen);
            }
        }
        let present = gb.iter().fold(VarSet::empty(), |s, p| s.union(p.vars()));
        let base: Vec<Var> = present.iter().filter(|v| !state.inverses.contains(*v)).collect();
        for subset in subsets(&base, self.budget.max_elimination_vars) {
            let keep: VarSet = subset.iter().copied().collect();
            let eliminate = VarSet(present.0 & !keep.0);
            let Some(eg) = self.basis(gb, MonomialOrder::Eliminate(eliminate)) else { continue };
            for e in eg.into_iter().filter(|e| e.vars().is_subset(keep)) {
                consider(e, &mut seen);
            }
        }
        let unknowns: VarSet = [Var::LAM, Var::L1, Var::L2, Var::L3].into_iter().collect();
        found
            .into_iter()
            .min_by_key(|(c, s)| (VarSet(c.vars().0 & unknowns.0).len(), s.len(), c.vars().len(), c.to_text()))
            .map(|(_, s)| s)
    }

    fn close(&self, mut state: State, depth: usize) -> Option<Vec<ProofStep>> {
        let mut steps = Vec::new();
        let gb = loop {
            let gb = self.basis(&state.gens, MonomialOrder::Grevlex)?;
            if gb == [Poly::one()] {
                steps.push(ProofStep::GroebnerOne);
                return Some(steps);
            }
            match self.find_form(&state, &gb) {
                Some(found) => {
                    for s in found {
                        state.apply(&s);
                        steps.push(s);
                    }
                }
                None => break gb,
            }
        };
        if depth >= self.budget.max_split_depth {
            return None;
        }
        let present = gb.iter().fold(VarSet::empty(), |s, p| s.union(p.vars()));
        for v in SPLIT_ORDER.into_iter().filter(|v| present.contains(*v)) {
            if state.nonzero.contains(&Poly::var(v)) {
                continue;
            }
            let t = state.fresh(1)[0];
            let mut zero = state.clone();
            zero.gens.push(Poly::var(v));
            let Some(zs) = self.close(zero, depth + 1) else { continue };
            let mut nonzero = state.clone();
            nonzero.inverses.insert(t);
            nonzero.gens.push(&Poly::one() - &(&Poly::var(t) * &Poly::var(v)));
            nonzero.nonzero.push(Poly::var(v));
            let Some(ns) = self.close(nonzero, depth + 1) else { continue };
            steps.push(ProofStep::CaseSplit { poly: v.name(), fresh: t.name(), zero: zs, nonzero: ns });
            return Some(steps);
        }
        None
    }
}

/// Searches for a refutation of the real solutions of `system`.
///
/// Returns `None` when the budget is exhausted or the rules do not apply;
/// that is not evidence of feasibility.
pub fn prove_infeasible(system: &SolitonSystem, budget: ProverBudget) -> Option<Vec<ProofStep>> {
    let mut state = State { gens: system.equalities(), nonzero: Vec::new(), inverses: VarSet::empty() };
    let mut steps = Vec::new();
    for q in &system.inequations {
        if state.nonzero.contains(q) {
            continue;
        }
        let t = state.fresh(1)[0];
        state.nonzero.push(q.clone());
        let s = ProofStep::Saturate { poly: q.to_text(), fresh: t.name() };
        state.apply(&s);
        steps.push(s);
    }
    let prover = Prover { budget, probes: system.nonzero_equations() };
    steps.extend(prover.close(state, 0)?);
    Some(steps)
}

/// Proves every case branch of a presentation for one connection kind.
pub fn prove_theorem(theorem: &str, lie: &LiePresentation, kind: ConnectionKind, budget: ProverBudget) -> Option<InfeasibilityProof> {
    let branches = SolitonSystem::branches(lie, kind)
        .into_iter()
        .map(|(fix, s)| prove_infeasible(&s, budget).map(|steps| BranchProof { fix: fix_key(&fix), steps }))
        .collect::<Option<Vec<_>>>()?;
    Some(InfeasibilityProof {
        format: PROOF_FORMAT.into(),
        theorem: theorem.into(),
        group: lie.name.clone(),
        kind,
        branches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::proof::replay_proof;
    use crate::lie::{builtin, GroupId};
    use crate::poly::poly;

    fn lie(n: u8) -> LiePresentation {
        builtin(GroupId::new(n).unwrap())
    }

    #[test]
    fn recentred_forms() {
        let st = State { gens: vec![poly("alpha")], nonzero: vec![], inverses: VarSet::empty() };
        let s = definite_form(&poly("alpha^2 - 2*alpha + 1 + beta^2"), &st).unwrap();
        assert_eq!(
            s,
            vec![
                ProofStep::Define { name: "t1".into(), expr: "alpha - 1".into() },
                ProofStep::RealSos { poly: "beta^2 + t1^2".into(), vars: vec!["t1".into(), "beta".into()] },
            ]
        );
        let s = definite_form(&poly("-alpha^2 - 1"), &st).unwrap();
        assert_eq!(s.len(), 2);
        assert!(definite_form(&poly("alpha^2 - 1"), &st).is_none());
        assert!(definite_form(&poly("alpha*beta + 1"), &st).is_none());
    }

    #[test]
    fn g1_proofs_replay() {
        let b = ProverBudget::default();
        let p = prove_theorem("g1-c0", &lie(1), ConnectionKind::C0, b).unwrap();
        replay_proof(&p, &lie(1), b.limits()).unwrap();
        let p = prove_theorem("g1-c3", &lie(1), ConnectionKind::C3, b).unwrap();
        let stats = replay_proof(&p, &lie(1), b.limits()).unwrap();
        assert_eq!(stats.sos_forms, vec!["alpha^2 + alpha*lbar + lbar^2".to_string()]);
    }

    #[test]
    fn feasible_system_has_no_proof() {
        assert!(prove_theorem("g3-c0", &lie(3), ConnectionKind::C0, ProverBudget { max_split_depth: 1, ..Default::default() }).is_none());
    }

    #[test]
    fn budget_from_env_rejects_garbage() {
        let e = BudgetError { var: ENV_MAX_PAIRS, value: "x".into() };
        assert!(e.to_string().contains("LORSOL_MAX_PAIRS"));
    }
}
