//! Gröbner bases, real-infeasibility certificates and solution-family checks.

mod buchberger;
mod quadratic;

pub use buchberger::{
    groebner_basis, is_groebner_basis, is_reduced_basis, s_polynomial, GroebnerError, GroebnerLimits,
};
pub use quadratic::{
    determinant, leading_principal_minors, pd_quadratic_check, quadratic_form_matrix, solve_linear,
};

use crate::poly::{reduce, MonomialOrder, Poly};

/// A polynomial ideal given by generators and the order used to compute
/// its basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Ideal {
    pub generators: Vec<Poly>,
    pub order: MonomialOrder,
}

impl Ideal {
    /// Drops zero generators.
    pub fn new(generators: impl IntoIterator<Item = Poly>, order: MonomialOrder) -> Self {
        Ideal {
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
            order,
        }
    }

    pub fn grevlex(generators: impl IntoIterator<Item = Poly>) -> Self {
        Self::new(generators, MonomialOrder::Grevlex)
    }

    pub fn groebner_basis(&self, limits: GroebnerLimits) -> Result<Vec<Poly>, GroebnerError> {
        groebner_basis(&self.generators, self.order, limits)
    }

    pub fn contains(&self, p: &Poly, limits: GroebnerLimits) -> Result<bool, GroebnerError> {
        ideal_membership(p, self, limits)
    }
}

/// `p ∈ I`, decided by reduction modulo a Gröbner basis of `I`.
pub fn ideal_membership(p: &Poly, ideal: &Ideal, limits: GroebnerLimits) -> Result<bool, GroebnerError> {
    let basis = ideal.groebner_basis(limits)?;
    Ok(reduce(p, &basis, ideal.order).is_zero())
}
