//! Prints the connection, symmetrized Ricci tensor and soliton equations of
//! one group and connection.
//!
//! Usage: `cargo run --example tensors -- G4 C2`

use lorentz_solitons::connection::{ConnectionKind, Connections};
use lorentz_solitons::curvature::rho_tilde;
use lorentz_solitons::lie::{builtin, GroupId};
use lorentz_solitons::soliton::{SolitonSystem, EQUATION_LABELS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let group: GroupId = args.next().unwrap_or_else(|| "G4".into()).parse()?;
    let kind: ConnectionKind = args.next().unwrap_or_else(|| "C2".into()).parse()?;
    let lie = builtin(group);
    let conns = Connections::of(&lie);
    let c = conns.get(kind);
    println!("nabla_(e_i) e_j for {group} {kind}:");
    for i in 0..3 {
        for j in 0..3 {
            let v = &c.gamma[i][j];
            if v.iter().any(|p| !p.is_zero()) {
                println!("  e{} e{} -> [{}, {}, {}]", i + 1, j + 1, v[0], v[1], v[2]);
            }
        }
    }
    let rt = rho_tilde(c, &lie);
    println!("symmetrized Ricci:");
    for (label, p) in EQUATION_LABELS.iter().zip(rt.upper()) {
        println!("  {label} = {p}");
    }
    println!("soliton equations:");
    for (label, e) in EQUATION_LABELS.iter().zip(&SolitonSystem::build(&lie, kind).equations) {
        println!("  {label}: {e} = 0");
    }
    Ok(())
}
