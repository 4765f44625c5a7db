//! Exact rational and sparse multivariate polynomial arithmetic.

mod monomial;
pub mod parse;
#[allow(clippy::module_inception)]
mod poly;
pub mod ratfn;
pub mod reduce;
pub mod var;

pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_poly_with, parse_ratfn, poly, Bindings, ParseError};
pub use poly::{int, rat, Poly};
pub use ratfn::RatFn;
pub use reduce::{divide, reduce};
pub use var::{Var, VarSet, BASE_SYMBOLS};

/// Arbitrary-precision rational; always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Which of the binary ring operations [`arith`] performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
}

pub fn arith(a: &Poly, b: &Poly, kind: ArithKind) -> Poly {
    match kind {
        ArithKind::Add => a + b,
        ArithKind::Sub => a - b,
        ArithKind::Mul => a * b,
    }
}

/// Three-component vector of polynomials, coefficients on `(e1, e2, e3)`.
pub type PolyVec = [Poly; 3];

pub fn zero_vec() -> PolyVec {
    [Poly::zero(), Poly::zero(), Poly::zero()]
}

pub fn basis_vec(i: usize) -> PolyVec {
    let mut v = zero_vec();
    v[i] = Poly::one();
    v
}
