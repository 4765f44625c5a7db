//! Theorem registry: which (group, connection) pairs admit solitons, the
//! families that describe them, and proofs for the pairs that do not.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::{FamilyError, InfeasibilityProof, SolutionFamily};
use crate::connection::ConnectionKind;
use crate::lie::{builtin_ids, GroupId};
use crate::reference::{group_bindings, Discrepancy, ReferenceError};

pub const REGISTRY_FORMAT: &str = "lorentz-solitons/theorems/1";

const REGISTRY: &str = include_str!("../data/theorems.toml");

macro_rules! proofs {
    ($($id:literal),* $(,)?) => {
        &[$(($id, include_str!(concat!("../data/proofs/", $id, ".json")))),*]
    };
}

/// Proof files shipped with the crate, by file stem.
const PROOFS: &[(&str, &str)] =
    proofs!["G1-C0", "G1-C1", "G2-C0", "G2-C1", "G4-C1", "G1-C3", "G2-C2", "G2-C3", "G4-C2", "G4-C3"];

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("registry: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("registry format `{0}` is not supported")]
    Format(String),
    #[error("theorem {id}: {message}")]
    Invalid { id: String, message: String },
    #[error("registry: {0}")]
    Coverage(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Reference(#[from] ReferenceError),
    #[error("unknown theorem `{0}`")]
    Unknown(String),
    #[error("proof file {path}: {message}")]
    Proof { path: String, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// No soliton exists.
    Infeasible,
    /// Solitons exist and are described by families.
    Families,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub label: String,
    #[serde(default)]
    pub assign: Vec<String>,
    #[serde(default)]
    pub equal: Vec<String>,
    #[serde(default)]
    pub nonzero: Vec<String>,
    /// Assignments as originally printed, expected to fail.
    #[serde(default)]
    pub printed: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnownDiscrepancy {
    pub key: String,
    /// Text the discrepancy detail must contain.
    pub expect: String,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTheorem {
    id: String,
    group: String,
    kind: ConnectionKind,
    verdict: Verdict,
    proof: Option<String>,
    #[serde(default)]
    notes: String,
    #[serde(default)]
    family: Vec<FamilySpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRegistry {
    format: String,
    #[serde(default)]
    known_discrepancy: Vec<KnownDiscrepancy>,
    theorem: Vec<RawTheorem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremRecord {
    pub id: String,
    pub group: GroupId,
    pub kind: ConnectionKind,
    pub verdict: Verdict,
    /// Proof file name, for infeasible records.
    pub proof: Option<String>,
    pub families: Vec<FamilySpec>,
    pub notes: String,
}

impl TheoremRecord {
    /// Families parsed with the group's shorthands in scope.
    pub fn solution_families(&self) -> Result<Vec<SolutionFamily>, RegistryError> {
        let (env, _) = group_bindings(self.group)?;
        self.families
            .iter()
            .map(|f| Ok(SolutionFamily::parse(&f.label, &f.assign, &f.equal, &f.nonzero, &env)?))
            .collect()
    }

    /// Families with their printed assignments substituted, for the
    /// families that carry a correction.
    pub fn printed_families(&self) -> Result<Vec<SolutionFamily>, RegistryError> {
        let (env, _) = group_bindings(self.group)?;
        let mut out = Vec::new();
        for f in self.families.iter().filter(|f| !f.printed.is_empty()) {
            let printed_vars: Vec<&str> = f.printed.iter().filter_map(|a| a.split_once('=')).map(|(l, _)| l.trim()).collect();
            let assign: Vec<String> = f
                .assign
                .iter()
                .filter(|a| a.split_once('=').is_none_or(|(l, _)| !printed_vars.contains(&l.trim())))
                .chain(&f.printed)
                .cloned()
                .collect();
            let label = format!("{} (printed)", f.label);
            out.push(SolutionFamily::parse(&label, &assign, &f.equal, &f.nonzero, &env)?);
        }
        Ok(out)
    }

    /// The shipped proof for this record.
    pub fn builtin_proof(&self) -> Option<Result<InfeasibilityProof, RegistryError>> {
        let name = self.proof.as_deref()?;
        let stem = name.strip_suffix(".json").unwrap_or(name);
        let text = PROOFS.iter().find(|(id, _)| *id == stem).map(|(_, t)| *t);
        Some(match text {
            Some(t) => InfeasibilityProof::from_json(t).map_err(|e| RegistryError::Proof { path: name.to_string(), message: e.to_string() }),
            None => Err(RegistryError::Proof { path: name.to_string(), message: "not shipped with the crate".into() }),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Registry {
    pub theorems: Vec<TheoremRecord>,
    pub known: Vec<KnownDiscrepancy>,
}

impl Registry {
    pub fn builtin() -> Result<Registry, RegistryError> {
        Registry::parse(REGISTRY)
    }

    /// Parses and validates: one record per (group, kind) pair of the
    /// built-in groups, ids unique, and each verdict with its payload.
    pub fn parse(text: &str) -> Result<Registry, RegistryError> {
        let raw: RawRegistry = toml::from_str(text)?;
        if raw.format != REGISTRY_FORMAT {
            return Err(RegistryError::Format(raw.format));
        }
        let mut theorems = Vec::new();
        for t in raw.theorem {
            let invalid = |message: &str| RegistryError::Invalid { id: t.id.clone(), message: message.to_string() };
            let group: GroupId = t.group.parse().map_err(|_| invalid("unknown group"))?;
            if !ConnectionKind::SOLITON.contains(&t.kind) {
                return Err(invalid("kind must be C0, C1, C2 or C3"));
            }
            match t.verdict {
                Verdict::Infeasible if t.proof.is_none() || !t.family.is_empty() => {
                    return Err(invalid("an infeasible record needs a proof and no families"))
                }
                Verdict::Families if t.proof.is_some() || t.family.is_empty() => {
                    return Err(invalid("a family record needs families and no proof"))
                }
                _ => {}
            }
            let mut labels: Vec<&str> = t.family.iter().map(|f| f.label.as_str()).collect();
            labels.sort_unstable();
            if labels.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid("duplicate family label"));
            }
            theorems.push(TheoremRecord {
                id: t.id,
                group,
                kind: t.kind,
                verdict: t.verdict,
                proof: t.proof,
                families: t.family,
                notes: t.notes,
            });
        }
        for (n, a) in theorems.iter().enumerate() {
            for b in &theorems[n + 1..] {
                if a.id == b.id {
                    return Err(RegistryError::Coverage(format!("id {} is used twice", a.id)));
                }
                if (a.group, a.kind) == (b.group, b.kind) {
                    return Err(RegistryError::Coverage(format!("{} {} has two records", a.group, a.kind)));
                }
            }
        }
        let expected = builtin_ids().len() * ConnectionKind::SOLITON.len();
        if theorems.len() != expected {
            return Err(RegistryError::Coverage(format!("{} records, expected {expected}", theorems.len())));
        }
        Ok(Registry { theorems, known: raw.known_discrepancy })
    }

    /// Looks up by id, or by a `G3 C0` style pair.
    pub fn get(&self, id: &str) -> Result<&TheoremRecord, RegistryError> {
        let norm: String = id.trim().to_ascii_uppercase().replace([' ', '/', '_'], "-");
        self.theorems
            .iter()
            .find(|t| t.id.eq_ignore_ascii_case(&norm))
            .ok_or_else(|| RegistryError::Unknown(id.to_string()))
    }

    pub fn is_known(&self, d: &Discrepancy) -> bool {
        self.known.iter().any(|k| k.key == d.key && d.detail.contains(&k.expect))
    }

    pub fn family_count(&self) -> usize {
        self.theorems.iter().map(|t| t.families.len()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_registry_is_complete() {
        let r = Registry::builtin().unwrap();
        assert_eq!(r.theorems.len(), 28);
        let infeasible = r.theorems.iter().filter(|t| t.verdict == Verdict::Infeasible).count();
        assert_eq!(infeasible, 10);
        for t in &r.theorems {
            t.solution_families().unwrap();
            if let Some(p) = t.builtin_proof() {
                let p = p.unwrap();
                assert_eq!((p.group.as_str(), p.kind), (t.group.to_string().as_str(), t.kind));
            }
        }
        assert_eq!(r.get("g3 c0").unwrap().id, "G3-C0");
    }

    #[test]
    fn printed_variant_replaces_assignment() {
        let r = Registry::builtin().unwrap();
        let printed = r.get("G3-C3").unwrap().printed_families().unwrap();
        assert_eq!(printed.len(), 1);
        let (_, l3) = printed[0].assignments.iter().find(|(v, _)| *v == crate::poly::Var::L3).unwrap();
        assert!(l3.den.vars().contains(crate::poly::Var::LAM));
    }

    #[test]
    fn malformed_registries_are_rejected() {
        let one = |body: &str| format!("format = \"{REGISTRY_FORMAT}\"\n{body}");
        let bad = one("[[theorem]]\nid = \"x\"\ngroup = \"G1\"\nkind = \"C0\"\nverdict = \"infeasible\"\n");
        assert!(matches!(Registry::parse(&bad), Err(RegistryError::Invalid { .. })));
        let short = one("[[theorem]]\nid = \"x\"\ngroup = \"G1\"\nkind = \"C0\"\nverdict = \"infeasible\"\nproof = \"p\"\n");
        assert!(matches!(Registry::parse(&short), Err(RegistryError::Coverage(_))));
        assert!(matches!(Registry::parse("format = \"other\"\ntheorem = []"), Err(RegistryError::Format(_))));
    }
}
