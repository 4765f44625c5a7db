//! Affine Ricci soliton systems `L_V g + 2ρ̃ + 2λg = 0`.

mod matching;

pub use matching::{match_paper_system, EquationMatch, MatchReport, MatchTier};

use serde_json::{json, Value};

use crate::connection::{Connections, ConnectionKind, ConnectionTable};
use crate::curvature::{rho_tilde, zero_matrix, SymTensor, UPPER};
use crate::lie::{LiePresentation, METRIC};
use crate::poly::{int, Poly, PolyVec, Var, VarSet};

/// Labels of the six equations, one-based as in `(j,k)`.
pub const EQUATION_LABELS: [&str; 6] = ["(1,1)", "(1,2)", "(1,3)", "(2,2)", "(2,3)", "(3,3)"];

/// `(L_V g)(e_j, e_k) = g(∇_{e_j} V, e_k) + g(e_j, ∇_{e_k} V)` for the
/// left-invariant field `V = l1 e1 + l2 e2 + l3 e3`.
pub fn lie_derivative_metric(c: &ConnectionTable) -> SymTensor {
    let v: PolyVec = Var::FIELD.map(Poly::var);
    let nv: [PolyVec; 3] = std::array::from_fn(|j| c.nabla_vec(j, &v));
    let mut entries = zero_matrix();
    for (j, row) in entries.iter_mut().enumerate() {
        for (k, e) in row.iter_mut().enumerate() {
            let a = nv[j][k].scale(&int(METRIC[k]));
            let b = nv[k][j].scale(&int(METRIC[j]));
            *e = &a + &b;
        }
    }
    SymTensor { entries, symmetric: true }
}

/// `lv[j][k] + 2 rt[j][k] + 2 lam g(e_j, e_k)` over the upper triangle.
pub fn assemble_system(lv: &SymTensor, rt: &SymTensor) -> [Poly; 6] {
    let lam = Poly::var(Var::LAM);
    UPPER.map(|(j, k)| {
        let mut e = &lv.entries[j][k] + &rt.entries[j][k].scale(&int(2));
        if j == k {
            e = &e + &lam.scale(&int(2 * METRIC[j]));
        }
        e
    })
}

/// The six soliton equations of one (group, connection) pair with the side
/// conditions they are solved under.
#[derive(Clone, Debug, PartialEq)]
pub struct SolitonSystem {
    pub group: String,
    pub kind: ConnectionKind,
    /// Indexed like [`EQUATION_LABELS`].
    pub equations: [Poly; 6],
    pub params: Vec<Var>,
    pub constraints: Vec<Poly>,
    /// Declared nonzero; includes `lbar` for perturbed connections.
    pub inequations: Vec<Poly>,
}

impl SolitonSystem {
    pub fn build(lie: &LiePresentation, kind: ConnectionKind) -> Self {
        let conns = Connections::of(lie);
        Self::from_connection(lie, conns.get(kind))
    }

    pub fn from_connection(lie: &LiePresentation, c: &ConnectionTable) -> Self {
        let rt = rho_tilde(c, lie);
        let lv = lie_derivative_metric(c);
        let mut inequations = lie.inequations.clone();
        if c.kind.is_perturbed() {
            inequations.push(Poly::var(Var::LBAR));
        }
        SolitonSystem {
            group: lie.name.clone(),
            kind: c.kind,
            equations: assemble_system(&lv, &rt),
            params: lie.params.clone(),
            constraints: lie.constraints.clone(),
            inequations,
        }
    }

    /// One system per case branch of the presentation (a single system when
    /// there are no cases).
    pub fn branches(lie: &LiePresentation, kind: ConnectionKind) -> Vec<(Vec<(Var, crate::poly::Rational)>, SolitonSystem)> {
        lie.branches()
            .into_iter()
            .map(|(fix, p)| (fix, SolitonSystem::build(&p, kind)))
            .collect()
    }

    /// Symbols the equations may use: parameters, `lam`, the field
    /// components, and `lbar` when perturbed.
    pub fn symbols(&self) -> VarSet {
        let mut s: VarSet = self.params.iter().copied().collect();
        s.insert(Var::LAM);
        for v in Var::FIELD {
            s.insert(v);
        }
        if self.kind.is_perturbed() {
            s.insert(Var::LBAR);
        }
        s
    }

    pub fn nonzero_equations(&self) -> Vec<Poly> {
        self.equations.iter().filter(|e| !e.is_zero()).cloned().collect()
    }

    /// Equations and constraints together.
    pub fn equalities(&self) -> Vec<Poly> {
        let mut v = self.nonzero_equations();
        v.extend(self.constraints.iter().cloned());
        v
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# {} {}\n", self.group, self.kind);
        for (label, e) in EQUATION_LABELS.iter().zip(&self.equations) {
            out.push_str(&format!("{label} {} = 0\n", e.to_text()));
        }
        for c in &self.constraints {
            out.push_str(&format!("constraint {} = 0\n", c.to_text()));
        }
        for q in &self.inequations {
            out.push_str(&format!("nonzero {}\n", q.to_text()));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group,
            "kind": self.kind.as_str(),
            "equations": EQUATION_LABELS.iter().zip(&self.equations)
                .map(|(l, e)| json!({"entry": l, "poly": e.to_text()}))
                .collect::<Vec<_>>(),
            "constraints": self.constraints.iter().map(Poly::to_text).collect::<Vec<_>>(),
            "inequations": self.inequations.iter().map(Poly::to_text).collect::<Vec<_>>(),
        })
    }
}
