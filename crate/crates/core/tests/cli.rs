//! End-to-end runs of the `lorsol` binary.

use std::path::Path;
use std::process::{Command, Output};

fn lorsol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lorsol")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_names_every_group_and_theorem() {
    let o = lorsol(&["list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for g in 1..=7 {
        assert!(text.contains(&format!("  G{g}  params")), "{text}");
    }
    assert_eq!(text.lines().filter(|l| l.contains("infeasible, proof")).count(), 10);
    assert_eq!(text.lines().filter(|l| l.ends_with("families") || l.ends_with("family")).count(), 18);
}

#[test]
fn tensors_json_has_every_table() {
    let o = lorsol(&["tensors", "--group", "G4", "--kind", "C2", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let gamma = &v["connection"]["gamma"];
    assert_eq!(gamma.as_array().unwrap().len(), 3);
    assert_eq!(gamma[2][2][2], "lbar");
    assert!(v.as_object().unwrap().len() > 1, "{v}");
}

#[test]
fn paper_check_reports_a_bijection_with_scalars() {
    let o = lorsol(&["system", "--group", "G2", "--kind", "C2", "--paper-check"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("bijection: true"), "{text}");
    assert!(text.contains("(3,3) = -2 * line"), "{text}");
}

#[test]
fn verify_one_theorem() {
    let o = lorsol(&["verify", "--theorem", "G3-C3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("1 of 1 verified"));
}

#[test]
fn emitted_proof_replays_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("G1-C3.json");
    let o = lorsol(&["prove-infeasible", "--group", "G1", "--kind", "C3", "--emit", file.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("definite form alpha^2 + alpha*lbar + lbar^2"));
    assert!(std::fs::read_to_string(&file).unwrap().contains("real_sos"));
    let o = lorsol(&["verify", "--theorem", "G1-C3", "--proofs", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("G1-C3  verified: proof"), "{}", stdout(&o));
}

#[test]
fn no_proof_for_a_feasible_pair() {
    assert_eq!(lorsol(&["prove-infeasible", "--group", "G3", "--kind", "C0"]).status.code(), Some(3));
}

#[test]
fn sample_is_reproducible() {
    let args = ["sample", "--group", "G6", "--kind", "C0", "--points", "20", "--seed", "5"];
    let (a, b) = (lorsol(&args), lorsol(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["points"], 20);
    assert!(v["max_residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn json_report_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let o = lorsol(&["report", "--format", "json", "--points", "10", "--output", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read_to_string(path).unwrap()
    };
    let (a, b) = (run("a.json"), run("b.json"));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["theorems"].as_array().unwrap().len(), 28);
}

fn corrupt(dir: &Path) {
    let text = include_str!("../data/proofs/G1-C0.json").replace("\"alpha\"", "\"beta\"");
    std::fs::write(dir.join("G1-C0.json"), text).unwrap();
}

#[test]
fn corrupted_proof_directory_fails_the_run() {
    let dir = tempfile::tempdir().unwrap();
    corrupt(dir.path());
    let o = lorsol(&["verify", "--theorem", "G1-C0", "--proofs", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("refuted"));
}

#[test]
fn invalid_input_exits_with_two() {
    assert_eq!(lorsol(&["tensors", "--group", "G9", "--kind", "C0"]).status.code(), Some(2));
    assert_eq!(lorsol(&["verify", "--theorem", "G8-C0"]).status.code(), Some(2));
    assert_eq!(lorsol(&["system", "--group", "G1", "--kind", "C7"]).status.code(), Some(2));
}
