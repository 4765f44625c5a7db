//! Evaluates the soliton residuals at sampled family points through the
//! floating-point pipeline, for every group and connection.
//!
//! Usage: `cargo run --example numeric_sample -- 100`

use lorentz_solitons::lie::builtin;
use lorentz_solitons::numeric::sample_numeric_check;
use lorentz_solitons::registry::{Registry, Verdict};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let points: usize = std::env::args().nth(1).map_or(Ok(100), |a| a.parse())?;
    for t in Registry::builtin()?.theorems {
        let families = if t.verdict == Verdict::Families { t.solution_families()? } else { Vec::new() };
        let r = sample_numeric_check(&builtin(t.group), t.kind, &families, points, 1);
        println!(
            "{:<6} {:>4} points  max residual {:.1e}  max disagreement {:.1e}  {}",
            t.id,
            r.points,
            r.max_residual,
            r.max_disagreement,
            if r.passed() { "ok" } else { "FAILED" }
        );
    }
    Ok(())
}
