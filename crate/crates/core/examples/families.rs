//! Verifies every solution family of one theorem and prints the witnesses,
//! or explains why a family has no rational point.
//!
//! Usage: `cargo run --example families -- G6-C0`

use lorentz_solitons::certify::{rational_obstruction, verify_family, WitnessSearch};
use lorentz_solitons::groebner::GroebnerLimits;
use lorentz_solitons::lie::builtin;
use lorentz_solitons::registry::Registry;
use lorentz_solitons::soliton::SolitonSystem;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let id = std::env::args().nth(1).unwrap_or_else(|| "G6-C0".into());
    let registry = Registry::builtin()?;
    let record = registry.get(&id)?;
    let lie = builtin(record.group);
    let limits = GroebnerLimits::default();
    for family in record.solution_families()? {
        for (fix, system) in SolitonSystem::branches(&lie, record.kind) {
            let family = family.fix(&fix);
            let r = verify_family(&system, &family, WitnessSearch::default(), limits);
            match (&r.witness, r.first_failure()) {
                (Some(w), None) => println!("{}: verified at {}", r.label, w.to_text()),
                (_, Some(why)) => println!("{}: {why}", r.label),
                (None, None) => unreachable!("a report without a witness names a failure"),
            }
            if r.witness.as_ref().is_some_and(|w| !w.is_rational()) {
                if let Some(why) = rational_obstruction(&system, &family, limits) {
                    println!("  no rational point: {why}");
                }
            }
        }
    }
    Ok(())
}
