//! Searches for an infeasibility proof and prints it as JSON.
//!
//! Usage: `cargo run --example prove -- G1 C3`

use lorentz_solitons::certify::{prove_theorem, replay_proof, ProverBudget};
use lorentz_solitons::connection::ConnectionKind;
use lorentz_solitons::lie::{builtin, GroupId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let group: GroupId = args.next().unwrap_or_else(|| "G1".into()).parse()?;
    let kind: ConnectionKind = args.next().unwrap_or_else(|| "C3".into()).parse()?;
    let lie = builtin(group);
    let budget = ProverBudget::from_env()?;
    match prove_theorem(&format!("{group}-{kind}"), &lie, kind, budget) {
        Some(proof) => {
            let stats = replay_proof(&proof, &lie, budget.limits())?;
            print!("{}", proof.to_json());
            eprintln!("replayed {} steps, {} leaves", stats.steps, stats.leaves);
        }
        None => eprintln!("no proof within budget"),
    }
    Ok(())
}
