//! Compares every bundled reference table and system with the computation.

use lorentz_solitons::reference::{all_inferences, collect_discrepancies};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for inf in all_inferences()? {
        println!("{}: inferred {} = {} from {}", inf.group, inf.name, inf.value.to_text(), inf.source);
    }
    let found = collect_discrepancies()?;
    println!("{} discrepancies", found.len());
    for d in found {
        println!("{}: {}", d.key, d.detail);
    }
    Ok(())
}
