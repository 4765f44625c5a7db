use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use lorentz_solitons::certify::{prove_theorem, replay_proof, ProverBudget};
use lorentz_solitons::connection::{ConnectionKind, Connections};
use lorentz_solitons::curvature::rho_tilde;
use lorentz_solitons::lie::{builtin_ids, get_presentation, GroupId, LiePresentation, PresentationSource};
use lorentz_solitons::numeric::sample_numeric_check;
use lorentz_solitons::reference::check_system;
use lorentz_solitons::registry::{Registry, Verdict};
use lorentz_solitons::report::{emit_report, run_all, ProofSource, ReportFormat, RunOptions};
use lorentz_solitons::soliton::{lie_derivative_metric, SolitonSystem, EQUATION_LABELS};

/// Exact affine Ricci soliton computations on three-dimensional Lorentzian
/// Lie groups.
///
/// Prover budgets can be overridden with LORSOL_MAX_PAIRS and
/// LORSOL_MAX_SPLIT_DEPTH.
#[derive(Parser)]
#[command(name = "lorsol", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct Target {
    /// G1..G7, or a path to a .liealg presentation
    #[arg(long)]
    group: String,
    /// C0, C1, C2 or C3 (LC for the Levi-Civita connection where allowed)
    #[arg(long)]
    kind: ConnectionKind,
}

#[derive(clap::Args, Clone)]
struct RunArgs {
    /// Seed for witness and numeric sampling
    #[arg(long, default_value_t = RunOptions::default().seed)]
    seed: u64,
    /// Directory of proof files overriding the shipped ones
    #[arg(long)]
    proofs: Option<PathBuf>,
    /// Search for infeasibility proofs instead of replaying files
    #[arg(long)]
    search: bool,
    /// Numeric oracle points per theorem (0 disables it)
    #[arg(long, default_value_t = 100)]
    points: usize,
    /// Include wall times (makes the report nondeterministic)
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in groups and registered theorems
    List,
    /// Print the connection, the symmetrized Ricci tensor and the Lie derivative of the metric
    Tensors {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        json: bool,
    },
    /// Print the soliton system of a pair
    System {
        #[command(flatten)]
        target: Target,
        /// Match against the reference transcription
        #[arg(long)]
        paper_check: bool,
        #[arg(long)]
        json: bool,
    },
    /// Verify one theorem or all of them
    Verify {
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        theorem: Option<String>,
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Search for an infeasibility proof and replay it
    ProveInfeasible {
        #[command(flatten)]
        target: Target,
        /// Write the proof as JSON to this file
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Cross-check family points through the floating-point pipeline
    Sample {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = RunOptions::default().seed)]
        seed: u64,
    },
    /// Run everything and emit a report
    Report {
        #[arg(long, default_value = "markdown")]
        format: ReportFormat,
        /// Write to this file instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
}

type Error = Box<dyn std::error::Error>;

/// `println!` that reports write errors, so a closed pipe ends the run quietly.
macro_rules! outln {
    ($($t:tt)*) => { writeln!(std::io::stdout().lock(), $($t)*)? };
}

macro_rules! out {
    ($($t:tt)*) => { write!(std::io::stdout().lock(), $($t)*)? };
}

fn presentation(group: &str) -> Result<(LiePresentation, Option<GroupId>), Error> {
    match group.parse::<GroupId>() {
        Ok(id) => Ok((get_presentation(&PresentationSource::Builtin(id))?, Some(id))),
        Err(_) => {
            let lie = get_presentation(&PresentationSource::File(group.into()))?;
            for (branch, r) in lie.jacobi_failures(ProverBudget::from_env()?.limits())? {
                eprintln!("warning: {branch} violates the Jacobi identity: residual {r} is not in the constraint ideal");
            }
            Ok((lie, None))
        }
    }
}

fn soliton_kind(kind: ConnectionKind) -> Result<ConnectionKind, Error> {
    if ConnectionKind::SOLITON.contains(&kind) {
        Ok(kind)
    } else {
        Err(format!("{kind} is not one of the soliton connections C0..C3").into())
    }
}

fn options(run: &RunArgs) -> Result<RunOptions, Error> {
    Ok(RunOptions {
        seed: run.seed,
        budget: ProverBudget::from_env()?,
        proof_dir: run.proofs.clone(),
        proofs: if run.search { ProofSource::Search } else { ProofSource::Files },
        numeric_points: run.points,
        timings: run.timings,
    })
}

fn list() -> Result<ExitCode, Error> {
    outln!("groups:");
    for id in builtin_ids() {
        let lie = lorentz_solitons::lie::builtin(id);
        let params: Vec<String> = lie.params.iter().map(|v| v.name()).collect();
        let mut line = format!("  {id}  params {}", params.join(" "));
        if !lie.constraints.is_empty() {
            let c: Vec<String> = lie.constraints.iter().map(|p| format!("{p} = 0")).collect();
            line.push_str(&format!("; {}", c.join(", ")));
        }
        if !lie.inequations.is_empty() {
            let c: Vec<String> = lie.inequations.iter().map(|p| format!("{p} != 0")).collect();
            line.push_str(&format!("; {}", c.join(", ")));
        }
        outln!("{line}");
    }
    outln!("theorems:");
    for t in Registry::builtin()?.theorems {
        let what = match t.verdict {
            Verdict::Infeasible => format!("infeasible, proof {}", t.proof.unwrap_or_default()),
            Verdict::Families => format!("{} families", t.families.len()),
        };
        outln!("  {:<6} {} {}  {what}", t.id, t.group, t.kind);
    }
    Ok(ExitCode::SUCCESS)
}

fn tensors(target: &Target, as_json: bool) -> Result<ExitCode, Error> {
    let (lie, _) = presentation(&target.group)?;
    let conns = Connections::of(&lie);
    let c = conns.get(target.kind);
    let rt = rho_tilde(c, &lie);
    let lv = lie_derivative_metric(c);
    if as_json {
        let doc = json!({
            "group": lie.name,
            "kind": target.kind.as_str(),
            "connection": c.to_json(),
            "rho_tilde": rt.to_json_rows(),
            "lie_derivative": lv.to_json_rows(),
        });
        outln!("{}", serde_json::to_string_pretty(&doc)?);
        return Ok(ExitCode::SUCCESS);
    }
    outln!("# {} {}", lie.name, target.kind);
    outln!("connection (nabla_ei ej):");
    for i in 0..3 {
        for j in 0..3 {
            let v = c.nabla(i, j);
            if v.iter().any(|p| !p.is_zero()) {
                outln!("  e{} e{} = ({}, {}, {})", i + 1, j + 1, v[0], v[1], v[2]);
            }
        }
    }
    for (name, t) in [("rho_tilde", &rt), ("lie_derivative", &lv)] {
        outln!("{name}:");
        for (label, p) in EQUATION_LABELS.iter().zip(t.upper()) {
            outln!("  {label} {p}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn system(target: &Target, paper_check: bool, as_json: bool) -> Result<ExitCode, Error> {
    let kind = soliton_kind(target.kind)?;
    let (lie, id) = presentation(&target.group)?;
    let s = SolitonSystem::build(&lie, kind);
    if !paper_check {
        if as_json {
            outln!("{}", serde_json::to_string_pretty(&s.to_json())?);
        } else {
            out!("{}", s.to_text());
        }
        return Ok(ExitCode::SUCCESS);
    }
    let id = id.ok_or("--paper-check needs a built-in group")?;
    let check = check_system(id, kind)?;
    let r = &check.report;
    if as_json {
        let doc = json!({
            "group": id.to_string(),
            "kind": kind.as_str(),
            "bijection": r.is_bijection(),
            "matches": r.matches.iter().map(|m| json!({
                "entry": EQUATION_LABELS[m.assembled],
                "reference_line": m.reference + 1,
                "scalar": m.scalar.to_string(),
                "tier": format!("{:?}", m.tier),
            })).collect::<Vec<_>>(),
            "zero": r.zero.iter().map(|&i| EQUATION_LABELS[i]).collect::<Vec<_>>(),
            "pinned": r.pinned.iter().map(|v| v.name()).collect::<Vec<_>>(),
            "implied": r.implied.iter().map(|&i| EQUATION_LABELS[i]).collect::<Vec<_>>(),
            "unmatched_reference": r.unmatched_reference.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "unmatched_assembled": r.unmatched_assembled.iter().map(|&i| EQUATION_LABELS[i]).collect::<Vec<_>>(),
        });
        outln!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        out!("{}", s.to_text());
        outln!("reference {}:", check.reference.name);
        for m in &r.matches {
            outln!("  {} = {} * line {} ({:?})", EQUATION_LABELS[m.assembled], m.scalar, m.reference + 1, m.tier);
        }
        for &i in &r.zero {
            outln!("  {} vanishes identically", EQUATION_LABELS[i]);
        }
        for (i, j, c) in &r.duplicates {
            outln!("  {} = {c} * {}", EQUATION_LABELS[*i], EQUATION_LABELS[*j]);
        }
        for &i in &r.implied {
            outln!("  {} is implied by the pinned variables", EQUATION_LABELS[i]);
        }
        for (n, _, text) in &check.reference.errata {
            outln!("  line {} is printed as `{text}`", n + 1);
        }
        outln!("bijection: {}", r.is_bijection());
    }
    Ok(if r.is_bijection() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn prove(target: &Target, emit: Option<&PathBuf>) -> Result<ExitCode, Error> {
    let kind = soliton_kind(target.kind)?;
    let (lie, _) = presentation(&target.group)?;
    let budget = ProverBudget::from_env()?;
    let Some(proof) = prove_theorem(&format!("{}-{kind}", lie.name), &lie, kind, budget) else {
        eprintln!("no proof found within budget");
        return Ok(ExitCode::from(3));
    };
    let stats = replay_proof(&proof, &lie, budget.limits())?;
    match emit {
        Some(path) => std::fs::write(path, proof.to_json())?,
        None => out!("{}", proof.to_json()),
    }
    eprintln!("proof replayed: {} steps, {} {}", stats.steps, stats.leaves, if stats.leaves == 1 { "leaf" } else { "leaves" });
    for f in &stats.sos_forms {
        eprintln!("  definite form {f}");
    }
    Ok(ExitCode::SUCCESS)
}

fn sample(target: &Target, points: usize, seed: u64) -> Result<ExitCode, Error> {
    if points == 0 {
        return Err("--points must be at least 1".into());
    }
    let kind = soliton_kind(target.kind)?;
    let (lie, id) = presentation(&target.group)?;
    let families = match id {
        Some(id) => {
            let reg = Registry::builtin()?;
            let t = reg.theorems.iter().find(|t| t.group == id && t.kind == kind).ok_or("pair not registered")?;
            t.solution_families()?
        }
        None => Vec::new(),
    };
    let r = sample_numeric_check(&lie, kind, &families, points, seed);
    outln!("{}", serde_json::to_string_pretty(&r)?);
    Ok(if r.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(u8::try_from(code).unwrap_or(1))
}

fn run() -> Result<ExitCode, Error> {
    let cli = Cli::parse();
    match &cli.command {
        Command::List => list(),
        Command::Tensors { target, json } => tensors(target, *json),
        Command::System { target, paper_check, json } => system(target, *paper_check, *json),
        Command::Verify { theorem, all: _, run } => {
            let reg = Registry::builtin()?;
            let ids = theorem.as_ref().map(|t| vec![t.clone()]);
            let report = run_all(&reg, ids.as_deref(), &options(run)?);
            for t in &report.theorems {
                let status = format!("{:?}", t.status).to_lowercase();
                match &t.detail {
                    Some(d) => outln!("{:<6} {status}: {d}", t.id),
                    None => outln!("{:<6} {status}: {}", t.id, t.certificate()),
                }
            }
            for d in report.discrepancies.iter().filter(|d| !d.known) {
                outln!("unexpected discrepancy {}: {}", d.key, d.detail);
            }
            if let Some(e) = &report.error {
                outln!("invalid run: {e}");
            }
            let s = &report.summary;
            outln!("{} of {} verified", s.verified, s.theorems);
            Ok(exit(report.exit_code()))
        }
        Command::ProveInfeasible { target, emit } => prove(target, emit.as_ref()),
        Command::Sample { target, points, seed } => sample(target, *points, *seed),
        Command::Report { format, output, run } => {
            let reg = Registry::builtin()?;
            let report = run_all(&reg, None, &options(run)?);
            let text = emit_report(&report, *format);
            match output {
                Some(p) => std::fs::write(p, text)?,
                None => out!("{text}"),
            }
            Ok(exit(report.exit_code()))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
