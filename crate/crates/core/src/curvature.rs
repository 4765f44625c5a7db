//! Curvature, Ricci and symmetrized Ricci tensors of frame connections.

use serde_json::{json, Value};

use crate::connection::ConnectionTable;
use crate::lie::{LiePresentation, METRIC};
use crate::poly::{int, rat, Poly};

pub type Matrix3 = [[Poly; 3]; 3];

pub fn zero_matrix() -> Matrix3 {
    std::array::from_fn(|_| std::array::from_fn(|_| Poly::zero()))
}

/// A 3×3 tensor on the frame, flagged symmetric when built by symmetrization.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor {
    pub entries: Matrix3,
    pub symmetric: bool,
}

impl SymTensor {
    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i][j]
    }

    /// Upper-triangle entries in the order (1,1),(1,2),(1,3),(2,2),(2,3),(3,3).
    pub fn upper(&self) -> [&Poly; 6] {
        UPPER.map(|(i, j)| &self.entries[i][j])
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Poly::is_zero)
    }

    pub fn sub(&self, o: &SymTensor) -> SymTensor {
        SymTensor {
            entries: std::array::from_fn(|i| std::array::from_fn(|j| &self.entries[i][j] - &o.entries[i][j])),
            symmetric: self.symmetric && o.symmetric,
        }
    }

    pub fn to_json_rows(&self) -> Value {
        let rows: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(Poly::to_text).collect())
            .collect();
        json!(rows)
    }
}

/// Zero-based index pairs of the upper triangle, in equation order.
pub const UPPER: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

/// `r[i][j][k][l]` is the coefficient of `e_l` in `R(e_i, e_j) e_k`, with
/// `R(X,Y)Z = ∇_X ∇_Y Z − ∇_Y ∇_X Z − ∇_{[X,Y]} Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor {
    pub r: [[[[Poly; 3]; 3]; 3]; 3],
}

pub fn curvature(c: &ConnectionTable, lie: &LiePresentation) -> CurvatureTensor {
    let g = &c.gamma;
    let r = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                std::array::from_fn(|l| {
                    let mut acc = Poly::zero();
                    for m in 0..3 {
                        acc = &acc + &(&g[j][k][m] * &g[i][m][l]);
                        acc = &acc - &(&g[i][k][m] * &g[j][m][l]);
                        acc = &acc - &(&lie.structure(i, j)[m] * &g[m][k][l]);
                    }
                    acc
                })
            })
        })
    });
    CurvatureTensor { r }
}

/// `ρ(X,Y) = −g(R(X,e1)Y,e1) − g(R(X,e2)Y,e2) + g(R(X,e3)Y,e3)`.
pub fn ricci(rt: &CurvatureTensor) -> Matrix3 {
    const WEIGHT: [i64; 3] = [-1, -1, 1];
    std::array::from_fn(|x| {
        std::array::from_fn(|y| {
            (0..3).fold(Poly::zero(), |acc, m| {
                &acc + &rt.r[x][m][y][m].scale(&int(WEIGHT[m] * METRIC[m]))
            })
        })
    })
}

/// `ρ̃(X,Y) = (ρ(X,Y) + ρ(Y,X)) / 2`.
pub fn ricci_symmetrized(rho: &Matrix3) -> SymTensor {
    let half = rat(1, 2);
    SymTensor {
        entries: std::array::from_fn(|i| std::array::from_fn(|j| (&rho[i][j] + &rho[j][i]).scale(&half))),
        symmetric: true,
    }
}

/// `ρ̃` of a connection in one call.
pub fn rho_tilde(c: &ConnectionTable, lie: &LiePresentation) -> SymTensor {
    ricci_symmetrized(&ricci(&curvature(c, lie)))
}
