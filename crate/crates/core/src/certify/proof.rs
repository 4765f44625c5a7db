//! Infeasibility proofs as step lists, their file format and an
//! independent replay checker.
//!
//! A proof refutes the real solutions of a soliton system.  Replay starts
//! from the equations and side conditions of a freshly built system and
//! accepts each step only after re-establishing its justification with
//! polynomial arithmetic, reduction and the positive-definiteness test.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connection::ConnectionKind;
use crate::groebner::{groebner_basis, pd_quadratic_check, GroebnerError, GroebnerLimits};
use crate::lie::LiePresentation;
use crate::poly::{parse_poly_with, reduce, Bindings, MonomialOrder, Poly, Var, VarSet};
use crate::soliton::SolitonSystem;

/// File format tag of serialized proofs.
pub const PROOF_FORMAT: &str = "lorentz-solitons/proof/1";

/// One inference step.  Polynomials are stored as text in the crate grammar.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum ProofStep {
    /// Adjoin `1 - fresh*poly` for a declared nonzero `poly`.
    Saturate { poly: String, fresh: String },
    /// `poly` lies in the ideal and is a positive-definite form in `vars`;
    /// adjoin every variable of `vars`.
    RealSos { poly: String, vars: Vec<String> },
    /// Introduce a fresh variable `name` with the generator `name - expr`.
    Define { name: String, expr: String },
    /// `var - expr` lies in the ideal; eliminate `var` everywhere.
    Substitute { var: String, expr: String },
    /// Refute `poly = 0` and `poly != 0` (saturated with `fresh`) separately.
    CaseSplit {
        poly: String,
        fresh: String,
        zero: Vec<ProofStep>,
        nonzero: Vec<ProofStep>,
    },
    /// The reduced Gröbner basis of the current ideal is `{1}`.
    GroebnerOne,
}

/// The steps refuting one case branch of a presentation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchProof {
    /// Values of case parameters, e.g. `{"eta": "1"}`; empty without cases.
    #[serde(default)]
    pub fix: BTreeMap<String, String>,
    pub steps: Vec<ProofStep>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfeasibilityProof {
    pub format: String,
    pub theorem: String,
    pub group: String,
    pub kind: ConnectionKind,
    pub branches: Vec<BranchProof>,
}

impl InfeasibilityProof {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("proofs serialize") + "\n"
    }

    pub fn from_json(src: &str) -> Result<Self, ReplayError> {
        let p: InfeasibilityProof = serde_json::from_str(src).map_err(|e| ReplayError::Format(e.to_string()))?;
        if p.format != PROOF_FORMAT {
            return Err(ReplayError::Format(format!("unsupported format `{}`", p.format)));
        }
        Ok(p)
    }

    /// Number of steps over all branches, counting nested ones.
    pub fn step_count(&self) -> usize {
        fn count(s: &[ProofStep]) -> usize {
            s.iter()
                .map(|x| match x {
                    ProofStep::CaseSplit { zero, nonzero, .. } => 1 + count(zero) + count(nonzero),
                    _ => 1,
                })
                .sum()
        }
        self.branches.iter().map(|b| count(&b.steps)).sum()
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ReplayError {
    #[error("malformed proof: {0}")]
    Format(String),
    #[error("{at}: cannot parse `{text}`: {message}")]
    Parse { at: String, text: String, message: String },
    #[error("{at}: `{poly}` is not a declared nonzero polynomial")]
    NotDeclared { at: String, poly: String },
    #[error("{at}: `{var}` is not a fresh auxiliary variable")]
    NotFresh { at: String, var: String },
    #[error("{at}: `{name}` is not a variable")]
    NotAVariable { at: String, name: String },
    #[error("{at}: `{poly}` is not a positive-definite form in the listed variables")]
    NotPositiveDefinite { at: String, poly: String },
    #[error("{at}: `{poly}` is not in the ideal")]
    NotInIdeal { at: String, poly: String },
    #[error("{at}: the Gröbner basis is not {{1}}")]
    NotOne { at: String },
    #[error("{at}: proof ends without a contradiction")]
    Incomplete { at: String },
    #[error("{at}: steps after a closing step")]
    Trailing { at: String },
    #[error("branch mismatch: {0}")]
    Branches(String),
    #[error("{at}: {source}")]
    Groebner { at: String, source: GroebnerError },
}

/// Summary of a successful replay.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReplayStats {
    pub steps: usize,
    pub leaves: usize,
    /// Every REAL_SOS form accepted, as text.
    pub sos_forms: Vec<String>,
}

/// Ideal generators and declared nonzero polynomials at one point of a proof.
#[derive(Clone, Debug)]
struct Facts {
    gens: Vec<Poly>,
    nonzero: Vec<Poly>,
}

impl Facts {
    fn used(&self) -> VarSet {
        self.gens.iter().chain(&self.nonzero).fold(VarSet::empty(), |s, p| s.union(p.vars()))
    }

    fn basis(&self, at: &str, limits: GroebnerLimits) -> Result<Vec<Poly>, ReplayError> {
        groebner_basis(&self.gens, MonomialOrder::Grevlex, limits)
            .map_err(|source| ReplayError::Groebner { at: at.to_string(), source })
    }

    fn contains(&self, p: &Poly, at: &str, limits: GroebnerLimits) -> Result<bool, ReplayError> {
        Ok(reduce(p, &self.basis(at, limits)?, MonomialOrder::Grevlex).is_zero())
    }
}

struct Replayer {
    limits: GroebnerLimits,
    stats: ReplayStats,
}

fn parse(at: &str, text: &str) -> Result<Poly, ReplayError> {
    parse_poly_with(text, &Bindings::new()).map_err(|e| ReplayError::Parse {
        at: at.to_string(),
        text: text.to_string(),
        message: e.to_string(),
    })
}

fn variable(at: &str, name: &str) -> Result<Var, ReplayError> {
    Var::from_name(name.trim()).ok_or_else(|| ReplayError::NotAVariable { at: at.to_string(), name: name.to_string() })
}

fn fresh(at: &str, name: &str, facts: &Facts) -> Result<Var, ReplayError> {
    let v = variable(at, name)?;
    if !v.is_aux() || facts.used().contains(v) {
        return Err(ReplayError::NotFresh { at: at.to_string(), var: name.to_string() });
    }
    Ok(v)
}

impl Replayer {
    fn run(&mut self, mut facts: Facts, steps: &[ProofStep], path: &str) -> Result<(), ReplayError> {
        for (n, step) in steps.iter().enumerate() {
            let at = format!("{path}step {}", n + 1);
            let last = n + 1 == steps.len();
            self.stats.steps += 1;
            match step {
                ProofStep::Saturate { poly, fresh: t } => {
                    let q = parse(&at, poly)?;
                    if !facts.nonzero.contains(&q) {
                        return Err(ReplayError::NotDeclared { at, poly: poly.clone() });
                    }
                    let t = fresh(&at, t, &facts)?;
                    facts.gens.push(&Poly::one() - &(&Poly::var(t) * &q));
                }
                ProofStep::RealSos { poly, vars } => {
                    let p = parse(&at, poly)?;
                    let vs = vars.iter().map(|v| variable(&at, v)).collect::<Result<Vec<_>, _>>()?;
                    if !pd_quadratic_check(&p, &vs) {
                        return Err(ReplayError::NotPositiveDefinite { at, poly: poly.clone() });
                    }
                    if !facts.contains(&p, &at, self.limits)? {
                        return Err(ReplayError::NotInIdeal { at, poly: poly.clone() });
                    }
                    self.stats.sos_forms.push(p.to_text());
                    facts.gens.extend(vs.into_iter().map(Poly::var));
                }
                ProofStep::Define { name, expr } => {
                    let e = parse(&at, expr)?;
                    let v = fresh(&at, name, &facts)?;
                    if e.vars().contains(v) {
                        return Err(ReplayError::NotFresh { at, var: name.clone() });
                    }
                    facts.gens.push(&Poly::var(v) - &e);
                }
                ProofStep::Substitute { var, expr } => {
                    let v = variable(&at, var)?;
                    let e = parse(&at, expr)?;
                    let lin = &Poly::var(v) - &e;
                    if e.vars().contains(v) || !facts.contains(&lin, &at, self.limits)? {
                        return Err(ReplayError::NotInIdeal { at, poly: lin.to_text() });
                    }
                    let b = std::collections::HashMap::from([(v, e)]);
                    facts.gens = facts.gens.iter().map(|g| g.substitute(&b)).filter(|g| !g.is_zero()).collect();
                    facts.nonzero = facts.nonzero.iter().map(|g| g.substitute(&b)).collect();
                }
                ProofStep::CaseSplit { poly, fresh: t, zero, nonzero } => {
                    if !last {
                        return Err(ReplayError::Trailing { at });
                    }
                    let p = parse(&at, poly)?;
                    let t = fresh(&at, t, &facts)?;
                    let mut z = facts.clone();
                    z.gens.push(p.clone());
                    self.run(z, zero, &format!("{at}/zero/"))?;
                    let mut nz = facts;
                    nz.gens.push(&Poly::one() - &(&Poly::var(t) * &p));
                    nz.nonzero.push(p);
                    return self.run(nz, nonzero, &format!("{at}/nonzero/"));
                }
                ProofStep::GroebnerOne => {
                    if !last {
                        return Err(ReplayError::Trailing { at });
                    }
                    if facts.basis(&at, self.limits)? != vec![Poly::one()] {
                        return Err(ReplayError::NotOne { at });
                    }
                    self.stats.leaves += 1;
                    return Ok(());
                }
            }
        }
        Err(ReplayError::Incomplete { at: path.trim_end_matches('/').to_string() })
    }
}

/// Replays the steps of one branch against a system.
pub fn replay_steps(system: &SolitonSystem, steps: &[ProofStep], limits: GroebnerLimits) -> Result<ReplayStats, ReplayError> {
    let facts = Facts { gens: system.equalities(), nonzero: system.inequations.clone() };
    let mut r = Replayer { limits, stats: ReplayStats::default() };
    r.run(facts, steps, "")?;
    Ok(r.stats)
}

/// Branch key as stored in proof files.
pub fn fix_key(fix: &[(Var, crate::poly::Rational)]) -> BTreeMap<String, String> {
    fix.iter().map(|(v, c)| (v.name(), c.to_string())).collect()
}

/// Replays a full proof: every case branch of the presentation must be
/// refuted exactly once.
pub fn replay_proof(proof: &InfeasibilityProof, lie: &LiePresentation, limits: GroebnerLimits) -> Result<ReplayStats, ReplayError> {
    if proof.format != PROOF_FORMAT {
        return Err(ReplayError::Format(format!("unsupported format `{}`", proof.format)));
    }
    if proof.group != lie.name {
        return Err(ReplayError::Format(format!("proof is for {}, presentation is {}", proof.group, lie.name)));
    }
    let systems = SolitonSystem::branches(lie, proof.kind);
    if systems.len() != proof.branches.len() {
        return Err(ReplayError::Branches(format!(
            "presentation has {} branches, proof has {}",
            systems.len(),
            proof.branches.len()
        )));
    }
    let mut total = ReplayStats::default();
    for (fix, system) in &systems {
        let key = fix_key(fix);
        let branch = proof
            .branches
            .iter()
            .find(|b| b.fix == key)
            .ok_or_else(|| ReplayError::Branches(format!("no proof for branch {key:?}")))?;
        let s = replay_steps(system, &branch.steps, limits)?;
        total.steps += s.steps;
        total.leaves += s.leaves;
        total.sos_forms.extend(s.sos_forms);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{builtin, GroupId};

    fn g1c0() -> SolitonSystem {
        SolitonSystem::build(&builtin(GroupId::new(1).unwrap()), ConnectionKind::C0)
    }

    fn steps(src: &str) -> Vec<ProofStep> {
        serde_json::from_str(src).unwrap()
    }

    const G1_C0: &str = r#"[
        {"step": "saturate", "poly": "alpha", "fresh": "t1"},
        {"step": "substitute", "var": "lam", "expr": "0"},
        {"step": "real_sos", "poly": "2*alpha^2 + beta^2", "vars": ["alpha", "beta"]},
        {"step": "groebner_one"}
    ]"#;

    #[test]
    fn handwritten_proof_replays() {
        let s = replay_steps(&g1c0(), &steps(G1_C0), GroebnerLimits::default()).unwrap();
        assert_eq!(s.leaves, 1);
        assert_eq!(s.sos_forms, vec!["2*alpha^2 + beta^2".to_string()]);
    }

    #[test]
    fn each_step_is_checked() {
        let lim = GroebnerLimits::default();
        let bad = G1_C0.replace("\"alpha\", \"fresh\"", "\"beta\", \"fresh\"");
        assert!(matches!(replay_steps(&g1c0(), &steps(&bad), lim), Err(ReplayError::NotDeclared { .. })));
        let bad = G1_C0.replace("2*alpha^2 + beta^2", "2*alpha^2 - beta^2");
        assert!(matches!(replay_steps(&g1c0(), &steps(&bad), lim), Err(ReplayError::NotPositiveDefinite { .. })));
        // the flat algebra only forces lam = 0
        let flat = SolitonSystem::build(&LiePresentation::abelian(), ConnectionKind::C0);
        let sos = steps(r#"[{"step": "real_sos", "poly": "alpha^2", "vars": ["alpha"]}, {"step": "groebner_one"}]"#);
        assert!(matches!(replay_steps(&flat, &sos, lim), Err(ReplayError::NotInIdeal { .. })));
        let sub = steps(r#"[{"step": "substitute", "var": "lam", "expr": "1"}, {"step": "groebner_one"}]"#);
        assert!(matches!(replay_steps(&flat, &sub, lim), Err(ReplayError::NotInIdeal { .. })));
        let short: Vec<ProofStep> = steps(G1_C0)[..3].to_vec();
        assert!(matches!(replay_steps(&g1c0(), &short, lim), Err(ReplayError::Incomplete { .. })));
        let early = steps(r#"[{"step": "groebner_one"}]"#);
        assert!(matches!(replay_steps(&g1c0(), &early, lim), Err(ReplayError::NotOne { .. })));
    }

    #[test]
    fn fresh_variables_must_be_unused() {
        let twice = steps(
            r#"[{"step": "saturate", "poly": "alpha", "fresh": "t1"},
                {"step": "saturate", "poly": "alpha", "fresh": "t1"},
                {"step": "groebner_one"}]"#,
        );
        assert!(matches!(
            replay_steps(&g1c0(), &twice, GroebnerLimits::default()),
            Err(ReplayError::NotFresh { .. })
        ));
    }

    #[test]
    fn case_split_needs_both_branches() {
        let split = steps(
            r#"[{"step": "saturate", "poly": "alpha", "fresh": "t1"},
                {"step": "case_split", "poly": "beta", "fresh": "t2",
                 "zero": [{"step": "groebner_one"}],
                 "nonzero": []}]"#,
        );
        let err = replay_steps(&g1c0(), &split, GroebnerLimits::default()).unwrap_err();
        assert!(matches!(&err, ReplayError::Incomplete { at } if at.ends_with("nonzero")), "{err}");
    }

    #[test]
    fn file_round_trip() {
        let p = InfeasibilityProof {
            format: PROOF_FORMAT.into(),
            theorem: "x".into(),
            group: "G1".into(),
            kind: ConnectionKind::C0,
            branches: vec![BranchProof { fix: BTreeMap::new(), steps: steps(G1_C0) }],
        };
        let back = InfeasibilityProof::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.step_count(), 4);
        replay_proof(&back, &builtin(GroupId::new(1).unwrap()), GroebnerLimits::default()).unwrap();
        assert!(InfeasibilityProof::from_json("{}").is_err());
    }
}
