//! Runs every theorem and prints the markdown report.
//!
//! Usage: `cargo run --example report`

use lorentz_solitons::registry::Registry;
use lorentz_solitons::report::{emit_report, run_all, ReportFormat, RunOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = run_all(&Registry::builtin()?, None, &RunOptions::default());
    print!("{}", emit_report(&report, ReportFormat::Markdown));
    std::process::exit(report.exit_code());
}
