//! Gröbner bases, ideal membership and a Rabinowitsch refutation.
//!
//! Usage: `cargo run --example groebner`

use lorentz_solitons::groebner::{groebner_basis, ideal_membership, GroebnerLimits, Ideal};
use lorentz_solitons::poly::{poly, MonomialOrder};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let limits = GroebnerLimits::default();
    let gens = [poly("alpha^2 + beta^2 - 1"), poly("alpha - beta")];
    for order in [MonomialOrder::Lex, MonomialOrder::Grevlex] {
        let basis = groebner_basis(&gens, order, limits)?;
        let shown: Vec<String> = basis.iter().map(|p| p.to_text_in(order)).collect();
        println!("{order:?}: {{{}}}", shown.join(", "));
    }
    let ideal = Ideal::grevlex(gens);
    for p in ["2*beta^2 - 1", "beta - 1"] {
        println!("{p} in ideal: {}", ideal_membership(&poly(p), &ideal, limits)?);
    }
    // alpha = 0 together with alpha != 0 via 1 - t1*alpha
    let basis = groebner_basis(&[poly("alpha"), poly("1 - t1*alpha")], MonomialOrder::Grevlex, limits)?;
    println!("alpha = 0, alpha != 0: basis {{{}}}", basis.iter().map(|p| p.to_text()).collect::<Vec<_>>().join(", "));
    Ok(())
}
