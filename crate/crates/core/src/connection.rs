//! Affine connections on a Lorentzian frame, stored as coefficient tables.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

use crate::lie::{LiePresentation, METRIC, PRODUCT};
use crate::poly::{int, rat, zero_vec, Poly, PolyVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum ConnectionKind {
    /// Levi-Civita.
    LC,
    /// Canonical connection.
    C0,
    /// Kobayashi-Nomizu connection.
    C1,
    /// Canonical connection plus `lbar` at the `e3 e3 e3` slot.
    C2,
    /// Kobayashi-Nomizu connection plus `lbar` at the `e3 e3 e3` slot.
    C3,
}

impl ConnectionKind {
    /// The four connections soliton systems are built from.
    pub const SOLITON: [ConnectionKind; 4] =
        [ConnectionKind::C0, ConnectionKind::C1, ConnectionKind::C2, ConnectionKind::C3];

    pub fn is_perturbed(self) -> bool {
        matches!(self, ConnectionKind::C2 | ConnectionKind::C3)
    }

    /// The unperturbed kind a perturbed one is built on.
    pub fn base(self) -> ConnectionKind {
        match self {
            ConnectionKind::C2 => ConnectionKind::C0,
            ConnectionKind::C3 => ConnectionKind::C1,
            k => k,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ConnectionKind::LC => "LC",
            ConnectionKind::C0 => "C0",
            ConnectionKind::C1 => "C1",
            ConnectionKind::C2 => "C2",
            ConnectionKind::C3 => "C3",
        }
    }
}

impl fmt::Display for ConnectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("unknown connection kind `{0}` (expected LC, C0, C1, C2 or C3)")]
pub struct UnknownKind(pub String);

impl FromStr for ConnectionKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "LC" => Ok(ConnectionKind::LC),
            "C0" | "0" => Ok(ConnectionKind::C0),
            "C1" | "1" => Ok(ConnectionKind::C1),
            "C2" | "2" => Ok(ConnectionKind::C2),
            "C3" | "3" => Ok(ConnectionKind::C3),
            _ => Err(UnknownKind(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConnectionError {
    #[error("expected a {expected} connection, got {found}")]
    WrongKind { expected: &'static str, found: ConnectionKind },
}

/// `gamma[i][j][k]` is the coefficient of `e_k` in `∇_{e_i} e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionTable {
    pub kind: ConnectionKind,
    pub gamma: [[PolyVec; 3]; 3],
}

fn zero_table() -> [[PolyVec; 3]; 3] {
    let row = || [zero_vec(), zero_vec(), zero_vec()];
    [row(), row(), row()]
}

impl ConnectionTable {
    /// `∇_{e_i} e_j`.
    pub fn nabla(&self, i: usize, j: usize) -> &PolyVec {
        &self.gamma[i][j]
    }

    /// `∇_{e_i} Y` for a left-invariant field `Y` with coefficients `y`.
    pub fn nabla_vec(&self, i: usize, y: &PolyVec) -> PolyVec {
        let mut out = zero_vec();
        for (m, ym) in y.iter().enumerate() {
            if ym.is_zero() {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o = &*o + &(ym * &self.gamma[i][m][k]);
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let gamma: Vec<Vec<Vec<String>>> = self
            .gamma
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(Poly::to_text).collect()).collect())
            .collect();
        json!({ "kind": self.kind.as_str(), "gamma": gamma })
    }

    /// `g(∇_i e_j, e_k) + g(e_j, ∇_i e_k)` for all triples; zero exactly for
    /// metric connections.
    pub fn metric_defect(&self) -> Vec<Poly> {
        let mut out = Vec::with_capacity(27);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let a = self.gamma[i][j][k].scale(&int(METRIC[k]));
                    let b = self.gamma[i][k][j].scale(&int(METRIC[j]));
                    out.push(&a + &b);
                }
            }
        }
        out
    }

    /// `∇_i e_j − ∇_j e_i − [e_i, e_j]` for all pairs.
    pub fn torsion(&self, lie: &LiePresentation) -> Vec<PolyVec> {
        let mut out = Vec::with_capacity(9);
        for i in 0..3 {
            for j in 0..3 {
                let c = lie.structure(i, j);
                out.push(std::array::from_fn(|k| {
                    &(&self.gamma[i][j][k] - &self.gamma[j][i][k]) - &c[k]
                }));
            }
        }
        out
    }

    /// `∇_i(J e_k) − J(∇_i e_k)` for all pairs; zero exactly when `∇J = 0`.
    pub fn j_defect(&self) -> Vec<PolyVec> {
        let mut out = Vec::with_capacity(9);
        for i in 0..3 {
            for k in 0..3 {
                out.push(std::array::from_fn(|m| {
                    self.gamma[i][k][m].scale(&int(PRODUCT[k] - PRODUCT[m]))
                }));
            }
        }
        out
    }
}

/// Levi-Civita connection from the Koszul formula
/// `2g(∇_X Y, Z) = g([X,Y],Z) − g([Y,Z],X) + g([Z,X],Y)` on frame fields.
pub fn levi_civita(lie: &LiePresentation) -> ConnectionTable {
    let mut gamma = zero_table();
    let half = rat(1, 2);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let t1 = lie.structure(i, j)[k].scale(&int(METRIC[k]));
                let t2 = lie.structure(j, k)[i].scale(&int(METRIC[i]));
                let t3 = lie.structure(k, i)[j].scale(&int(METRIC[j]));
                let s = &(&t1 - &t2) + &t3;
                // divide by g(e_k, e_k) = ±1
                gamma[i][j][k] = s.scale(&(&half * &int(METRIC[k])));
            }
        }
    }
    ConnectionTable { kind: ConnectionKind::LC, gamma }
}

/// `nj[i][j]` is `(∇_{e_i} J) e_j = ∇_{e_i}(J e_j) − J ∇_{e_i} e_j`.
pub fn nabla_j(lc: &ConnectionTable) -> Result<[[PolyVec; 3]; 3], ConnectionError> {
    expect_kind(lc, ConnectionKind::LC, "LC")?;
    let mut out = zero_table();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j][k] = lc.gamma[i][j][k].scale(&int(PRODUCT[j] - PRODUCT[k]));
            }
        }
    }
    Ok(out)
}

/// `∇⁰_X Y = ∇_X Y − ½ (∇_X J) J Y`.
pub fn canonical(lc: &ConnectionTable) -> Result<ConnectionTable, ConnectionError> {
    let nj = nabla_j(lc)?;
    let mut gamma = lc.gamma.clone();
    for i in 0..3 {
        for j in 0..3 {
            // J e_j = PRODUCT[j] e_j
            let c = rat(-PRODUCT[j], 2);
            for k in 0..3 {
                gamma[i][j][k] = &gamma[i][j][k] + &nj[i][j][k].scale(&c);
            }
        }
    }
    Ok(ConnectionTable { kind: ConnectionKind::C0, gamma })
}

/// `∇¹_X Y = ∇⁰_X Y − ¼ [(∇_Y J) J X − (∇_{JY} J) X]`.
pub fn kobayashi_nomizu(lc: &ConnectionTable, c0: &ConnectionTable) -> Result<ConnectionTable, ConnectionError> {
    let nj = nabla_j(lc)?;
    expect_kind(c0, ConnectionKind::C0, "C0")?;
    let mut gamma = c0.gamma.clone();
    for i in 0..3 {
        for j in 0..3 {
            // (∇_{e_j} J)(J e_i) − (∇_{J e_j} J) e_i = (J_i − J_j)(∇_{e_j} J) e_i
            let c = rat(-(PRODUCT[i] - PRODUCT[j]), 4);
            if PRODUCT[i] == PRODUCT[j] {
                continue;
            }
            for k in 0..3 {
                gamma[i][j][k] = &gamma[i][j][k] + &nj[j][i][k].scale(&c);
            }
        }
    }
    Ok(ConnectionTable { kind: ConnectionKind::C1, gamma })
}

/// Adds `lbar` to `∇_{e3} e3` along `e3`: C0 becomes C2 and C1 becomes C3.
pub fn perturb(c: &ConnectionTable, lbar: &Poly) -> Result<ConnectionTable, ConnectionError> {
    let kind = match c.kind {
        ConnectionKind::C0 => ConnectionKind::C2,
        ConnectionKind::C1 => ConnectionKind::C3,
        found => return Err(ConnectionError::WrongKind { expected: "C0 or C1", found }),
    };
    let mut out = add_at_e3e3e3(c, lbar);
    out.kind = kind;
    Ok(out)
}

/// The raw perturbation without kind bookkeeping.
fn add_at_e3e3e3(c: &ConnectionTable, lbar: &Poly) -> ConnectionTable {
    let mut out = c.clone();
    out.gamma[2][2][2] = &out.gamma[2][2][2] + lbar;
    out
}

fn expect_kind(c: &ConnectionTable, k: ConnectionKind, name: &'static str) -> Result<(), ConnectionError> {
    if c.kind == k {
        Ok(())
    } else {
        Err(ConnectionError::WrongKind { expected: name, found: c.kind })
    }
}

/// All five connections of a presentation, indexed by kind.
#[derive(Clone, Debug)]
pub struct Connections {
    pub lc: ConnectionTable,
    pub c0: ConnectionTable,
    pub c1: ConnectionTable,
    pub c2: ConnectionTable,
    pub c3: ConnectionTable,
}

impl Connections {
    pub fn of(lie: &LiePresentation) -> Self {
        let lbar = Poly::var(crate::poly::Var::LBAR);
        let lc = levi_civita(lie);
        let c0 = canonical(&lc).expect("LC input");
        let c1 = kobayashi_nomizu(&lc, &c0).expect("LC and C0 inputs");
        let c2 = perturb(&c0, &lbar).expect("C0 input");
        let c3 = perturb(&c1, &lbar).expect("C1 input");
        Connections { lc, c0, c1, c2, c3 }
    }

    pub fn get(&self, kind: ConnectionKind) -> &ConnectionTable {
        match kind {
            ConnectionKind::LC => &self.lc,
            ConnectionKind::C0 => &self.c0,
            ConnectionKind::C1 => &self.c1,
            ConnectionKind::C2 => &self.c2,
            ConnectionKind::C3 => &self.c3,
        }
    }
}

/// Convenience: one connection of a presentation.
pub fn connection(lie: &LiePresentation, kind: ConnectionKind) -> ConnectionTable {
    Connections::of(lie).get(kind).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{builtin, builtin_ids, GroupId};
    use crate::poly::{basis_vec, poly, Var};

    fn vec3(a: &str, b: &str, c: &str) -> PolyVec {
        [poly(a), poly(b), poly(c)]
    }

    fn g1() -> LiePresentation {
        builtin(GroupId::new(1).unwrap())
    }

    #[test]
    fn g1_levi_civita_values() {
        let lc = levi_civita(&g1());
        assert_eq!(lc.nabla(0, 0), &vec3("0", "-alpha", "-alpha"));
        let t: PolyVec = std::array::from_fn(|k| &lc.gamma[0][1][k] - &lc.gamma[1][0][k]);
        assert_eq!(t, vec3("alpha", "0", "-beta"));
    }

    #[test]
    fn g1_nabla_j_and_canonical() {
        let lc = levi_civita(&g1());
        let nj = nabla_j(&lc).unwrap();
        assert_eq!(nj[0][0], vec3("0", "0", "-2*alpha"));
        let c0 = canonical(&lc).unwrap();
        assert_eq!(c0.nabla(0, 0), &vec3("0", "-alpha", "0"));
    }

    #[test]
    fn nabla_j_anticommutes_with_j() {
        for id in builtin_ids() {
            let lc = levi_civita(&builtin(id));
            let nj = nabla_j(&lc).unwrap();
            for row in &nj {
                for (j, v) in row.iter().enumerate() {
                    // (∇J)(J e_j) = J_j (∇J) e_j must equal −J (∇J) e_j
                    for k in 0..3 {
                        let lhs = v[k].scale(&int(PRODUCT[j]));
                        let rhs = v[k].scale(&int(-PRODUCT[k]));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn levi_civita_is_metric_and_torsion_free() {
        for id in builtin_ids() {
            let lie = builtin(id);
            let lc = levi_civita(&lie);
            assert!(lc.metric_defect().iter().all(Poly::is_zero), "{id}");
            assert!(lc.torsion(&lie).iter().flatten().all(Poly::is_zero), "{id}");
        }
    }

    #[test]
    fn j_is_parallel_for_derived_connections() {
        for id in builtin_ids() {
            let all = Connections::of(&builtin(id));
            for k in ConnectionKind::SOLITON {
                assert!(all.get(k).j_defect().iter().flatten().all(Poly::is_zero), "{id} {k}");
            }
            assert!(!all.lc.j_defect().iter().flatten().all(Poly::is_zero), "{id} LC");
        }
    }

    #[test]
    fn abelian_connections() {
        let all = Connections::of(&LiePresentation::abelian());
        for k in [ConnectionKind::LC, ConnectionKind::C0, ConnectionKind::C1] {
            assert!(all.get(k).gamma.iter().flatten().flatten().all(Poly::is_zero));
        }
        let nonzero: Vec<_> = all.c2.gamma.iter().flatten().flatten().filter(|p| !p.is_zero()).collect();
        assert_eq!(nonzero, vec![&Poly::var(Var::LBAR)]);
    }

    #[test]
    fn perturbation_touches_one_slot() {
        let all = Connections::of(&g1());
        for (base, pert) in [(&all.c0, &all.c2), (&all.c1, &all.c3)] {
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        let d = &pert.gamma[i][j][k] - &base.gamma[i][j][k];
                        let expect = if (i, j, k) == (2, 2, 2) { poly("lbar") } else { Poly::zero() };
                        assert_eq!(d, expect);
                    }
                }
            }
        }
    }

    #[test]
    fn perturbation_is_additive_and_guarded() {
        let lbar = poly("lbar");
        let c0 = canonical(&levi_civita(&g1())).unwrap();
        let twice = add_at_e3e3e3(&add_at_e3e3e3(&c0, &lbar), &lbar);
        assert_eq!(&twice.gamma[2][2][2] - &c0.gamma[2][2][2], poly("2*lbar"));
        let c2 = perturb(&c0, &lbar).unwrap();
        assert!(matches!(perturb(&c2, &lbar), Err(ConnectionError::WrongKind { .. })));
        assert!(perturb(&levi_civita(&g1()), &lbar).is_err());
    }

    #[test]
    fn nabla_vec_is_linear() {
        let c1 = connection(&g1(), ConnectionKind::C1);
        let v = vec3("l1", "l2", "l3");
        let got = c1.nabla_vec(1, &v);
        for k in 0..3 {
            let expect = (0..3).fold(Poly::zero(), |acc, m| {
                &acc + &(&v[m] * &c1.gamma[1][m][k])
            });
            assert_eq!(got[k], expect);
        }
        assert_eq!(c1.nabla_vec(0, &basis_vec(2)), c1.gamma[0][2]);
    }

    #[test]
    fn json_shape() {
        let c0 = connection(&g1(), ConnectionKind::C0);
        let j = c0.to_json();
        assert_eq!(j["kind"], "C0");
        assert_eq!(j["gamma"][0][0][1], "-alpha");
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("c2".parse::<ConnectionKind>().unwrap(), ConnectionKind::C2);
        assert!("C9".parse::<ConnectionKind>().is_err());
    }
}
