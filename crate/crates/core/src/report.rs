//! Running registered theorems end to end and rendering the results.
//!
//! A run rebuilds each system from its presentation, matches it against the
//! reference transcription, then either verifies the solution families or
//! replays the infeasibility proof.  Reports are deterministic for a given
//! seed; wall times are only included on request.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use crate::certify::{prove_theorem, rational_obstruction, replay_proof, verify_family, InfeasibilityProof, ProverBudget, ResidualMethod, WitnessSearch};
use crate::certify::proof::fix_key;
use crate::connection::ConnectionKind;
use crate::lie::builtin;
use crate::numeric::{sample_numeric_check, SampleReport};
use crate::reference::{all_inferences, check_system, collect_discrepancies};
use crate::registry::{Registry, RegistryError, TheoremRecord, Verdict};
use crate::soliton::SolitonSystem;

pub const REPORT_FORMAT: &str = "lorentz-solitons/report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Verified,
    /// A residual, replay or cross-check concretely failed.
    Refuted,
    /// A budget ran out before a verdict.
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProofSource {
    /// Shipped proof files, or files in `proof_dir` when given.
    Files,
    /// Search afresh with the prover.
    Search,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub seed: u64,
    pub budget: ProverBudget,
    /// Directory whose proof files override the shipped ones.
    pub proof_dir: Option<PathBuf>,
    pub proofs: ProofSource,
    /// Numeric sample points per theorem; 0 skips the oracle.
    pub numeric_points: usize,
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: WitnessSearch::default().seed,
            budget: ProverBudget::default(),
            proof_dir: None,
            proofs: ProofSource::Files,
            numeric_points: 100,
            timings: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyOutcome {
    pub label: String,
    /// Case branch, e.g. `eta=-1`; empty without cases.
    pub branch: String,
    pub passed: bool,
    /// Entries shown zero by reduction or by a Nullstellensatz certificate
    /// rather than by substitution alone.
    pub nontrivial: Vec<String>,
    pub witness: Option<String>,
    pub rational_witness: bool,
    /// Exact reason why no rational witness exists, when none was found.
    pub no_rational_point: Option<String>,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErratumOutcome {
    pub label: String,
    pub branch: String,
    /// The printed form fails, as expected.
    pub rejected: bool,
    pub residual: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProofOutcome {
    pub source: String,
    pub steps: usize,
    pub leaves: usize,
    pub sos_forms: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremRun {
    pub id: String,
    pub group: String,
    pub kind: ConnectionKind,
    pub verdict: Verdict,
    pub status: Status,
    /// The assembled system matches the reference transcription.
    pub system_matched: bool,
    /// Scalar relating each assembled entry to its reference line.
    pub scalars: BTreeMap<String, String>,
    pub families: Vec<FamilyOutcome>,
    pub errata: Vec<ErratumOutcome>,
    pub proof: Option<ProofOutcome>,
    pub numeric: Option<SampleReport>,
    /// Reason for a non-verified status.
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u128>,
}

impl TheoremRun {
    /// Short description of the certificate.
    pub fn certificate(&self) -> String {
        match (&self.proof, self.verdict) {
            (Some(p), _) => format!("proof, {} steps, {} {}", p.steps, p.leaves, if p.leaves == 1 { "leaf" } else { "leaves" }),
            (None, Verdict::Families) => {
                let ok = self.families.iter().filter(|f| f.passed).count();
                let irrational = self.families.iter().filter(|f| f.passed && !f.rational_witness).count();
                let mut text = format!("{ok}/{} family checks with witnesses", self.families.len());
                if irrational > 0 {
                    text.push_str(&format!(" ({irrational} irrational)"));
                }
                text
            }
            (None, Verdict::Infeasible) => "none".into(),
        }
    }
}

fn branch_text(fix: &[(crate::poly::Var, crate::poly::Rational)]) -> String {
    fix_key(fix).iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

fn load_proof(record: &TheoremRecord, opts: &RunOptions) -> Result<(InfeasibilityProof, String), String> {
    let name = record.proof.clone().unwrap_or_default();
    if let Some(dir) = &opts.proof_dir {
        let path = dir.join(&name);
        if path.exists() {
            let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            let proof = InfeasibilityProof::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            return Ok((proof, path.display().to_string()));
        }
    }
    match record.builtin_proof() {
        Some(Ok(p)) => Ok((p, name)),
        Some(Err(e)) => Err(e.to_string()),
        None => Err("no proof file registered".into()),
    }
}

/// Runs one registered theorem through every stage.
pub fn run_theorem(record: &TheoremRecord, opts: &RunOptions) -> TheoremRun {
    let start = Instant::now();
    let lie = builtin(record.group);
    let mut run = TheoremRun {
        id: record.id.clone(),
        group: record.group.to_string(),
        kind: record.kind,
        verdict: record.verdict,
        status: Status::Verified,
        system_matched: false,
        scalars: BTreeMap::new(),
        families: Vec::new(),
        errata: Vec::new(),
        proof: None,
        numeric: None,
        detail: None,
        millis: None,
    };
    let fail = |run: &mut TheoremRun, status: Status, why: String| {
        if run.status == Status::Verified {
            run.status = status;
            run.detail = Some(why);
        }
    };
    match check_system(record.group, record.kind) {
        Ok(check) => {
            run.system_matched = check.report.is_bijection();
            for m in &check.report.matches {
                run.scalars.insert(crate::soliton::EQUATION_LABELS[m.assembled].to_string(), m.scalar.to_string());
            }
            if !run.system_matched {
                fail(&mut run, Status::Refuted, "assembled system does not match the reference transcription".into());
            }
        }
        Err(e) => fail(&mut run, Status::Refuted, e.to_string()),
    }
    let families = match record.solution_families() {
        Ok(f) => f,
        Err(e) => {
            fail(&mut run, Status::Refuted, e.to_string());
            Vec::new()
        }
    };
    let branches = SolitonSystem::branches(&lie, record.kind);
    let search = WitnessSearch { seed: opts.seed, ..WitnessSearch::default() };
    let limits = opts.budget.limits();
    match record.verdict {
        Verdict::Families => {
            for family in &families {
                for (fix, system) in &branches {
                    let r = verify_family(system, &family.fix(fix), search, limits);
                    let nontrivial = r
                        .checks
                        .iter()
                        .filter(|c| matches!(c.method, Some(ResidualMethod::Reduction | ResidualMethod::Nullstellensatz)))
                        .map(|c| format!("{} by {}", c.entry, if c.method == Some(ResidualMethod::Reduction) { "reduction" } else { "nullstellensatz" }))
                        .collect();
                    let rational_witness = r.witness.as_ref().is_some_and(|w| w.is_rational());
                    let no_rational_point = if r.residuals_vanish() && !rational_witness {
                        rational_obstruction(system, &family.fix(fix), limits)
                    } else {
                        None
                    };
                    run.families.push(FamilyOutcome {
                        label: family.label.clone(),
                        branch: branch_text(fix),
                        passed: r.passed(),
                        nontrivial,
                        witness: r.witness.as_ref().map(|w| w.to_text()),
                        rational_witness,
                        no_rational_point,
                        failure: r.first_failure(),
                    });
                }
            }
            if let Some(f) = run.families.iter().find(|f| !f.passed) {
                let why = format!("family {} {}: {}", f.label, f.branch, f.failure.clone().unwrap_or_default());
                fail(&mut run, Status::Refuted, why.replace("  ", " "));
            }
            match record.printed_families() {
                Ok(printed) => {
                    for family in &printed {
                        for (fix, system) in &branches {
                            let r = verify_family(system, &family.fix(fix), search, limits);
                            run.errata.push(ErratumOutcome {
                                label: family.label.clone(),
                                branch: branch_text(fix),
                                rejected: !r.residuals_vanish(),
                                residual: r.first_failure(),
                            });
                        }
                    }
                }
                Err(e) => fail(&mut run, Status::Refuted, e.to_string()),
            }
            if run.errata.iter().any(|e| !e.rejected) {
                fail(&mut run, Status::Refuted, "a printed form recorded as wrong verifies".into());
            }
        }
        Verdict::Infeasible => {
            let loaded = match opts.proofs {
                ProofSource::Files => load_proof(record, opts).map(Some),
                ProofSource::Search => Ok(prove_theorem(&record.id, &lie, record.kind, opts.budget).map(|p| (p, "search".to_string()))),
            };
            match loaded {
                Ok(Some((proof, source))) => {
                    if (proof.group.as_str(), proof.kind) != (lie.name.as_str(), record.kind) {
                        fail(&mut run, Status::Refuted, format!("proof {source} is for {} {}", proof.group, proof.kind));
                    } else {
                        match replay_proof(&proof, &lie, limits) {
                            Ok(stats) => {
                                run.proof = Some(ProofOutcome { source, steps: stats.steps, leaves: stats.leaves, sos_forms: stats.sos_forms })
                            }
                            Err(e) => fail(&mut run, Status::Refuted, format!("proof {source}: {e}")),
                        }
                    }
                }
                Ok(None) => fail(&mut run, Status::Inconclusive, "no proof found within budget".into()),
                Err(e) => fail(&mut run, Status::Refuted, e),
            }
        }
    }
    if opts.numeric_points > 0 {
        let numeric_families = if record.verdict == Verdict::Families { families.as_slice() } else { &[] };
        let sample = sample_numeric_check(&lie, record.kind, numeric_families, opts.numeric_points, opts.seed);
        if !sample.passed() {
            let why = format!("numeric oracle: residual {:e}, disagreement {:e}, failures {:?}", sample.max_residual, sample.max_disagreement, sample.failures);
            fail(&mut run, Status::Refuted, why);
        }
        run.numeric = Some(sample);
    }
    if opts.timings {
        run.millis = Some(start.elapsed().as_millis());
    }
    run
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscrepancyEntry {
    pub key: String,
    pub detail: String,
    /// Listed in the registry as a known misprint.
    pub known: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub theorems: usize,
    pub verified: usize,
    pub refuted: usize,
    pub inconclusive: usize,
    pub infeasible: usize,
    pub family_theorems: usize,
    pub unknown_discrepancies: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub format: String,
    pub engine: String,
    pub seed: u64,
    pub valid: bool,
    pub error: Option<String>,
    pub summary: Summary,
    pub theorems: Vec<TheoremRun>,
    pub inferences: Vec<String>,
    pub discrepancies: Vec<DiscrepancyEntry>,
}

impl RunReport {
    fn new(seed: u64) -> Self {
        RunReport {
            format: REPORT_FORMAT.into(),
            engine: format!("lorentz-solitons {}", env!("CARGO_PKG_VERSION")),
            seed,
            valid: true,
            error: None,
            summary: Summary::default(),
            theorems: Vec::new(),
            inferences: Vec::new(),
            discrepancies: Vec::new(),
        }
    }

    /// 0 iff the run is valid, every theorem verified and every
    /// discrepancy known; 1 for failures; 2 for an invalid run.
    pub fn exit_code(&self) -> i32 {
        if !self.valid {
            2
        } else if self.summary.verified == self.summary.theorems && self.summary.unknown_discrepancies == 0 {
            0
        } else {
            1
        }
    }

    fn summarize(&mut self) {
        let count = |s: Status| self.theorems.iter().filter(|t| t.status == s).count();
        self.summary = Summary {
            theorems: self.theorems.len(),
            verified: count(Status::Verified),
            refuted: count(Status::Refuted),
            inconclusive: count(Status::Inconclusive),
            infeasible: self.theorems.iter().filter(|t| t.verdict == Verdict::Infeasible).count(),
            family_theorems: self.theorems.iter().filter(|t| t.verdict == Verdict::Families).count(),
            unknown_discrepancies: self.discrepancies.iter().filter(|d| !d.known).count(),
        };
        if self.theorems.is_empty() && self.valid {
            self.valid = false;
            self.error = Some("no theorems were run".into());
        }
    }
}

/// Runs the given ids (all when `None`) and collects the reference
/// discrepancies.
pub fn run_all(registry: &Registry, ids: Option<&[String]>, opts: &RunOptions) -> RunReport {
    let mut report = RunReport::new(opts.seed);
    let records: Result<Vec<&TheoremRecord>, RegistryError> = match ids {
        None => Ok(registry.theorems.iter().collect()),
        Some(ids) => ids.iter().map(|id| registry.get(id)).collect(),
    };
    let records = match records {
        Ok(r) => r,
        Err(e) => {
            report.valid = false;
            report.error = Some(e.to_string());
            report.summarize();
            return report;
        }
    };
    // theorems are independent; results are collected in registry order
    report.theorems = std::thread::scope(|s| {
        let handles: Vec<_> = records.iter().map(|r| s.spawn(|| run_theorem(r, opts))).collect();
        handles.into_iter().map(|h| h.join().expect("theorem run panicked")).collect()
    });
    match collect_discrepancies() {
        Ok(ds) => {
            report.discrepancies = ds
                .into_iter()
                .map(|d| DiscrepancyEntry { known: registry.is_known(&d), key: d.key, detail: d.detail })
                .collect()
        }
        Err(e) => {
            report.valid = false;
            report.error = Some(e.to_string());
        }
    }
    match all_inferences() {
        Ok(inf) => report.inferences = inf.iter().map(|i| format!("{}: {} = {} from {}", i.group, i.name, i.value, i.source)).collect(),
        Err(e) => {
            report.valid = false;
            report.error = Some(e.to_string());
        }
    }
    report.summarize();
    report
}

/// A report with nothing run, flagged invalid.
pub fn empty_report(seed: u64) -> RunReport {
    let mut r = RunReport::new(seed);
    r.summarize();
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            _ => Err(format!("unknown report format `{s}` (expected json or markdown)")),
        }
    }
}

pub fn emit_report(report: &RunReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        ReportFormat::Markdown => markdown(report),
    }
}

fn markdown(r: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Soliton verification report\n");
    let _ = writeln!(out, "Engine `{}`, format `{}`, seed {}.\n", r.engine, r.format, r.seed);
    if let Some(e) = &r.error {
        let _ = writeln!(out, "**Invalid run:** {e}\n");
    }
    let s = &r.summary;
    let _ = writeln!(
        out,
        "{} theorems: {} verified, {} refuted, {} inconclusive ({} infeasible, {} with families).\n",
        s.theorems, s.verified, s.refuted, s.inconclusive, s.infeasible, s.family_theorems
    );
    if !r.theorems.is_empty() {
        let _ = writeln!(out, "| id | group | kind | verdict | status | certificate | numeric max residual |");
        let _ = writeln!(out, "|---|---|---|---|---|---|---|");
        for t in &r.theorems {
            let verdict = match t.verdict {
                Verdict::Infeasible => "infeasible",
                Verdict::Families => "families",
            };
            let status = match t.status {
                Status::Verified => "verified",
                Status::Refuted => "**refuted**",
                Status::Inconclusive => "inconclusive",
            };
            let numeric = t.numeric.as_ref().map_or("-".to_string(), |n| format!("{:.1e}", n.max_residual));
            let _ = writeln!(out, "| {} | {} | {} | {verdict} | {status} | {} | {numeric} |", t.id, t.group, t.kind, t.certificate());
        }
        let _ = writeln!(out);
        let failed: Vec<&TheoremRun> = r.theorems.iter().filter(|t| t.detail.is_some()).collect();
        if !failed.is_empty() {
            let _ = writeln!(out, "## Failures\n");
            for t in failed {
                let _ = writeln!(out, "- {}: {}", t.id, t.detail.as_deref().unwrap_or_default());
            }
            let _ = writeln!(out);
        }
        let irrational: Vec<(&str, &FamilyOutcome)> =
            r.theorems.iter().flat_map(|t| t.families.iter().filter(|f| f.passed && !f.rational_witness).map(move |f| (t.id.as_str(), f))).collect();
        if !irrational.is_empty() {
            let _ = writeln!(out, "## Families without rational points\n");
            for (id, f) in irrational {
                let why = f.no_rational_point.as_deref().unwrap_or("no rational point found and no obstruction proven");
                let _ = writeln!(out, "- {id} family {}: witness {}; {why}", f.label, f.witness.as_deref().unwrap_or("-"));
            }
            let _ = writeln!(out);
        }
        let errata: Vec<(&str, &ErratumOutcome)> = r.theorems.iter().flat_map(|t| t.errata.iter().map(move |e| (t.id.as_str(), e))).collect();
        if !errata.is_empty() {
            let _ = writeln!(out, "## Corrected statements\n");
            for (id, e) in errata {
                let verdict = if e.rejected { "fails as expected" } else { "unexpectedly verifies" };
                let _ = writeln!(out, "- {id} family {}: printed form {verdict}; {}", e.label, e.residual.as_deref().unwrap_or("no residual"));
            }
            let _ = writeln!(out);
        }
    }
    if !r.inferences.is_empty() {
        let _ = writeln!(out, "## Inferred shorthands\n");
        for i in &r.inferences {
            let _ = writeln!(out, "- {i}");
        }
        let _ = writeln!(out);
    }
    let _ = writeln!(out, "## Reference discrepancies\n");
    if r.discrepancies.is_empty() {
        let _ = writeln!(out, "None.");
    }
    for d in &r.discrepancies {
        let _ = writeln!(out, "- `{}` ({}): {}", d.key, if d.known { "known" } else { "**unexpected**" }, d.detail);
    }
    out
}
