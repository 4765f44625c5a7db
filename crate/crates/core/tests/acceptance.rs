//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! A criterion that cannot be met for a proven reason prints
//! `FAIL (unattainable)` with the reason; only other failures make the
//! process exit nonzero.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use lorentz_solitons::certify::{replay_proof, verify_family, InfeasibilityProof, ProofStep, SolutionFamily, WitnessSearch};
use lorentz_solitons::connection::{ConnectionKind, Connections};
use lorentz_solitons::curvature::rho_tilde;
use lorentz_solitons::groebner::{groebner_basis, is_groebner_basis, GroebnerLimits};
use lorentz_solitons::lie::{builtin, GroupId};
use lorentz_solitons::numeric::sample_numeric_check;
use lorentz_solitons::poly::{divide, parse_poly_with, Monomial, MonomialOrder, Poly, Rational, Var};
use lorentz_solitons::reference::{check_delta, check_system, check_table, group_bindings, TableKind};
use lorentz_solitons::registry::{Registry, TheoremRecord, Verdict};
use lorentz_solitons::report::{run_theorem, RunOptions};
use lorentz_solitons::soliton::SolitonSystem;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

enum Mark {
    Pass,
    Fail,
    /// Not met, for the recorded reason.
    Unattainable(String),
}

struct Outcome {
    verdict: Mark,
    detail: String,
}

impl Outcome {
    fn check(ok: bool, detail: String) -> Self {
        Outcome { verdict: if ok { Mark::Pass } else { Mark::Fail }, detail }
    }
}

fn within(ok: bool, elapsed: Duration, limit_s: u64) -> bool {
    ok && elapsed < Duration::from_secs(limit_s)
}

const UNPERTURBED: [ConnectionKind; 2] = [ConnectionKind::C0, ConnectionKind::C1];
const PERTURBED: [ConnectionKind; 2] = [ConnectionKind::C2, ConnectionKind::C3];

fn pairs(kinds: &[ConnectionKind]) -> Vec<(GroupId, ConnectionKind)> {
    GroupId::ALL.iter().flat_map(|g| kinds.iter().map(move |k| (*g, *k))).collect()
}

fn ricci_tables() -> Outcome {
    let start = Instant::now();
    let mut exact = 0;
    let mut flagged = Vec::new();
    let mut unexpected = Vec::new();
    for (g, k) in pairs(&UNPERTURBED) {
        let cmp = match check_table(g, k, TableKind::Ricci) {
            Ok(c) => c,
            Err(e) => return Outcome::check(false, e.to_string()),
        };
        if cmp.is_exact() {
            exact += 1;
            continue;
        }
        // a flagged entry must be explained by reading gamma for lam
        let explained = cmp.missing.is_empty()
            && cmp.mismatches().all(|m| m.readings.iter().any(|(from, to)| from == "lam" && to == "gamma"));
        if g.number() == 3 && explained {
            for m in cmp.mismatches() {
                flagged.push(format!("{} ({},{}) printed {} computed {}", cmp.name, m.index.0 + 1, m.index.1 + 1, m.printed.to_text(), m.computed.to_text()));
            }
        } else {
            unexpected.push(cmp.name.clone());
        }
    }
    let tables = flagged.iter().map(|f| f.split(' ').next().unwrap_or_default()).collect::<std::collections::BTreeSet<_>>().len();
    let ok = unexpected.is_empty() && tables <= 2 && exact + tables == 14;
    Outcome::check(
        within(ok, start.elapsed(), 5),
        format!("{exact}/14 exact, flagged: [{}], unexpected: {unexpected:?}, {:.2?}", flagged.join("; "), start.elapsed()),
    )
}

fn lie_tables() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (g, k) in pairs(&UNPERTURBED) {
        match check_table(g, k, TableKind::LieDerivative) {
            Ok(c) if c.is_exact() => {}
            Ok(c) => bad.push(c.name),
            Err(e) => bad.push(e.to_string()),
        }
    }
    Outcome::check(within(bad.is_empty(), start.elapsed(), 5), format!("{}/14 exact, failing {bad:?}, {:.2?}", 14 - bad.len(), start.elapsed()))
}

fn systems() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut scalars = 0;
    let mut non_unit = 0;
    for (g, k) in pairs(&ConnectionKind::SOLITON) {
        match check_system(g, k) {
            Ok(c) if c.report.is_bijection() => {
                scalars += c.report.matches.len();
                non_unit += c.report.matches.iter().filter(|m| m.scalar != Rational::from_integer(1.into())).count();
            }
            Ok(_) => bad.push(format!("{g}/{k}")),
            Err(e) => bad.push(e.to_string()),
        }
    }
    Outcome::check(
        within(bad.is_empty(), start.elapsed(), 5),
        format!("{}/28 bijections, {scalars} scalars reported ({non_unit} not 1), failing {bad:?}, {:.2?}", 28 - bad.len(), start.elapsed()),
    )
}

fn delta_entry(g: GroupId, k: ConnectionKind, i: usize, j: usize) -> Poly {
    let lie = builtin(g);
    let c = Connections::of(&lie);
    rho_tilde(c.get(k), &lie).get(i, j) - rho_tilde(c.get(k.base()), &lie).get(i, j)
}

fn deltas() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut exact = 0;
    for (g, k) in pairs(&PERTURBED) {
        match check_delta(g, k) {
            Ok(d) if d.is_exact() => exact += 1,
            Ok(d) => bad.push(d.name),
            Err(e) => bad.push(e.to_string()),
        }
    }
    let env = lorentz_solitons::poly::Bindings::new();
    let stated = [
        (GroupId::new(4).unwrap(), 0, 2, "lbar/2"),
        (GroupId::new(1).unwrap(), 1, 2, "lbar*alpha/2"),
    ];
    for (g, i, j, text) in stated {
        let want = parse_poly_with(text, &env).unwrap();
        let got = delta_entry(g, ConnectionKind::C2, i, j);
        if got != want {
            bad.push(format!("{g} C2 ({},{}) = {} not {text}", i + 1, j + 1, got.to_text()));
        }
    }
    Outcome::check(bad.is_empty(), format!("{exact}/14 delta tables exact, stated G4 and G1 values checked, failing {bad:?}, {:.2?}", start.elapsed()))
}

fn families(registry: &Registry) -> Outcome {
    let start = Instant::now();
    let opts = RunOptions { numeric_points: 0, ..RunOptions::default() };
    let (mut theorems, mut total, mut rational) = (0, 0, 0);
    let mut failed = Vec::new();
    let mut obstructed = Vec::new();
    for t in registry.theorems.iter().filter(|t| t.verdict == Verdict::Families) {
        theorems += 1;
        let run = run_theorem(t, &opts);
        for f in &run.families {
            total += 1;
            let name = format!("{} {}{}", t.id, f.label, if f.branch.is_empty() { String::new() } else { format!(" [{}]", f.branch) });
            if !f.passed {
                failed.push(format!("{name}: {}", f.failure.clone().unwrap_or_default()));
            } else if f.rational_witness {
                rational += 1;
            } else if let Some(why) = &f.no_rational_point {
                obstructed.push(format!("{name}: {why}"));
            } else {
                failed.push(format!("{name}: irrational witness only, no obstruction found"));
            }
        }
    }
    let detail = format!(
        "{theorems} theorems, {total} family checks, {rational} with rational witnesses, failing {failed:?}, {:.2?}",
        start.elapsed()
    );
    if !failed.is_empty() || theorems != 18 || start.elapsed() >= Duration::from_secs(30) {
        Outcome::check(false, detail)
    } else if !obstructed.is_empty() {
        Outcome { verdict: Mark::Unattainable(obstructed.join("; ")), detail }
    } else {
        Outcome::check(true, detail)
    }
}

fn proofs(registry: &Registry) -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut replayed = 0;
    let mut sos_ok = false;
    for t in registry.theorems.iter().filter(|t| t.verdict == Verdict::Infeasible) {
        let proof = match t.builtin_proof() {
            Some(Ok(p)) => p,
            Some(Err(e)) => {
                bad.push(e.to_string());
                continue;
            }
            None => {
                bad.push(format!("{}: no proof", t.id));
                continue;
            }
        };
        match replay_proof(&proof, &builtin(t.group), GroebnerLimits::default()) {
            Ok(stats) => {
                replayed += 1;
                if t.id == "G1-C3" {
                    sos_ok = stats.sos_forms.iter().any(|f| f == "alpha^2 + alpha*lbar + lbar^2");
                }
            }
            Err(e) => bad.push(format!("{}: {e}", t.id)),
        }
    }
    let ok = replayed == 10 && bad.is_empty() && sos_ok;
    Outcome::check(
        within(ok, start.elapsed(), 10),
        format!("{replayed}/10 replayed, G1-C3 definite form found: {sos_ok}, failing {bad:?}, {:.2?}", start.elapsed()),
    )
}

/// Shifts the `lam` assignment of a family by a nonzero constant.
fn corrupt_family(t: &TheoremRecord, label: &str, shift: &Rational) -> SolutionFamily {
    let spec = t.families.iter().find(|f| f.label == label).unwrap();
    let assign: Vec<String> = spec
        .assign
        .iter()
        .map(|a| match a.split_once('=') {
            Some((l, r)) if l.trim() == "lam" => format!("lam = ({}) + {shift}", r.trim()),
            _ => a.clone(),
        })
        .collect();
    let (env, _) = group_bindings(t.group).unwrap();
    SolutionFamily::parse(&format!("{label} (corrupted)"), &assign, &spec.equal, &spec.nonzero, &env).unwrap()
}

fn corrupt_proofs(registry: &Registry) -> Vec<(String, InfeasibilityProof)> {
    let load = |id: &str| registry.get(id).unwrap().builtin_proof().unwrap().unwrap();
    let mut out = Vec::new();

    let mut p = load("G1-C0");
    p.branches[0].steps.retain(|s| !matches!(s, ProofStep::Saturate { .. }));
    out.push(("G1-C0 without its saturation".to_string(), p));

    let mut p = load("G1-C3");
    for s in &mut p.branches[0].steps {
        if let ProofStep::RealSos { poly, .. } = s {
            *poly = "alpha^2 + 3*alpha*lbar + lbar^2".into();
        }
    }
    out.push(("G1-C3 with an indefinite form".to_string(), p));

    let mut p = load("G4-C3");
    for s in &mut p.branches[0].steps {
        if let ProofStep::Define { expr, .. } = s {
            *expr = "beta - 2".into();
        }
    }
    out.push(("G4-C3 with a wrong definition".to_string(), p));
    out
}

fn negative_controls(registry: &Registry) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut candidates: Vec<(&TheoremRecord, &str)> = registry
        .theorems
        .iter()
        .flat_map(|t| t.families.iter().filter(|f| f.assign.iter().any(|a| a.trim_start().starts_with("lam"))).map(move |f| (t, f.label.as_str())))
        .collect();
    candidates.shuffle(&mut rng);
    let search = WitnessSearch { attempts: 200, ..WitnessSearch::default() };
    let mut accepted = Vec::new();
    let mut lines = Vec::new();
    for (t, label) in candidates.into_iter().take(5) {
        let num: i64 = *[-3, -2, -1, 1, 2, 3].choose(&mut rng).unwrap();
        let shift = Rational::new(num.into(), rng.gen_range(1i64..=4).into());
        let family = corrupt_family(t, label, &shift);
        let lie = builtin(t.group);
        let rejected = SolitonSystem::branches(&lie, t.kind)
            .iter()
            .any(|(fix, system)| !verify_family(system, &family.fix(fix), search, GroebnerLimits::default()).residuals_vanish());
        lines.push(format!("{} {label} lam+{shift}", t.id));
        if !rejected {
            accepted.push(format!("{} {label}", t.id));
        }
    }
    for (name, proof) in corrupt_proofs(registry) {
        let group: GroupId = proof.group.parse().unwrap();
        match replay_proof(&proof, &builtin(group), GroebnerLimits::default()) {
            Ok(_) => accepted.push(name),
            Err(e) => lines.push(format!("{name}: {e}")),
        }
    }
    Outcome::check(accepted.is_empty() && lines.len() == 8, format!("rejected [{}], accepted {accepted:?}", lines.join("; ")))
}

fn random_poly(rng: &mut ChaCha8Rng, vars: &[Var]) -> Poly {
    let terms = (0..rng.gen_range(1..=3))
        .map(|_| {
            let degree = rng.gen_range(0..=3u16);
            let mut exps = vec![0u16; Var::DELTA.index() + 1];
            for _ in 0..degree {
                exps[vars[rng.gen_range(0..vars.len())].index()] += 1;
            }
            let c = *[-3i64, -2, -1, 1, 2, 3].choose(rng).unwrap();
            (Monomial::from_exponents(exps), Rational::from_integer(c.into()))
        })
        .collect::<Vec<_>>();
    Poly::from_terms(terms)
}

fn groebner_engine() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let all = [Var::ALPHA, Var::BETA, Var::GAMMA, Var::DELTA];
    let mut bad = Vec::new();
    let mut products = 0;
    for n in 0..20 {
        let vars = &all[..rng.gen_range(1..=4)];
        let gens: Vec<Poly> = (0..rng.gen_range(1..=4)).map(|_| random_poly(&mut rng, vars)).filter(|p| !p.is_zero()).collect();
        let order = if n % 2 == 0 { MonomialOrder::Grevlex } else { MonomialOrder::Lex };
        let basis = match groebner_basis(&gens, order, GroebnerLimits::default()) {
            Ok(b) => b,
            Err(e) => {
                bad.push(format!("ideal {n}: {e}"));
                continue;
            }
        };
        if !is_groebner_basis(&basis, order) {
            bad.push(format!("ideal {n}: an S-polynomial does not reduce to zero"));
        }
        for (i, f) in gens.iter().enumerate() {
            for g in &gens[i..] {
                products += 1;
                if !divide(&(f * g), &basis, order).1.is_zero() {
                    bad.push(format!("ideal {n}: product {} * {} not in the ideal", f.to_text(), g.to_text()));
                }
            }
        }
    }
    Outcome::check(
        within(bad.is_empty(), start.elapsed(), 30),
        format!("20 ideals, {products} generator products in the ideal, failing {bad:?}, {:.2?}", start.elapsed()),
    )
}

fn numeric(registry: &Registry) -> Outcome {
    let start = Instant::now();
    let (mut worst, mut disagreement, mut points) = (0f64, 0f64, 0);
    let mut bad = Vec::new();
    for t in &registry.theorems {
        let families = t.solution_families().unwrap();
        let families = if t.verdict == Verdict::Families { families.as_slice() } else { &[] };
        let r = sample_numeric_check(&builtin(t.group), t.kind, families, 100, SEED);
        worst = worst.max(r.max_residual);
        disagreement = disagreement.max(r.max_disagreement);
        points += r.points;
        if !r.passed() || r.max_residual >= 1e-9 {
            bad.push(t.id.clone());
        }
    }
    Outcome::check(
        bad.is_empty(),
        format!("28 pairs x 100 points, {points} family points, max residual {worst:.1e}, max disagreement {disagreement:.1e}, failing {bad:?}, {:.2?}", start.elapsed()),
    )
}

fn full_run() -> Outcome {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_lorsol");
    let dir = std::env::temp_dir().join(format!("lorsol-acceptance-{}", std::process::id()));
    let _ = std::fs::create_dir_all(&dir);
    let out = dir.join("report.json");
    let verify = Command::new(bin).args(["verify", "--all"]).output();
    let report = Command::new(bin).args(["report", "--format", "json", "--output"]).arg(&out).output();
    let _ = std::fs::remove_dir_all(&dir);
    let code = |r: &std::io::Result<std::process::Output>| r.as_ref().ok().and_then(|o| o.status.code());
    let (v, r) = (code(&verify), code(&report));
    Outcome::check(within(v == Some(0) && r == Some(0), start.elapsed(), 60), format!("verify exit {v:?}, report exit {r:?}, {:.2?}", start.elapsed()))
}

fn main() -> ExitCode {
    let registry = Registry::builtin().expect("built-in registry");
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("ricci tables", Box::new(ricci_tables)),
        ("lie-derivative tables", Box::new(lie_tables)),
        ("system matching", Box::new(systems)),
        ("perturbation deltas", Box::new(deltas)),
        ("family verification", Box::new(|| families(&registry))),
        ("infeasibility proofs", Box::new(|| proofs(&registry))),
        ("negative controls", Box::new(|| negative_controls(&registry))),
        ("groebner engine", Box::new(groebner_engine)),
        ("numeric oracle", Box::new(|| numeric(&registry))),
        ("full verify and report", Box::new(full_run)),
    ];
    let mut unexplained = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        match &o.verdict {
            Mark::Pass => println!("criterion {:>2} PASS {name}: {}", n + 1, o.detail),
            Mark::Fail => {
                unexplained += 1;
                println!("criterion {:>2} FAIL {name}: {}", n + 1, o.detail);
            }
            Mark::Unattainable(why) => println!("criterion {:>2} FAIL (unattainable) {name}: {}; {why}", n + 1, o.detail),
        }
    }
    if unexplained == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
