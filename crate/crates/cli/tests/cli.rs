//! End-to-end runs of the `hkr` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hkr(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkr"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn without_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn graphs_single_aerial_two_grounds() {
    let dir = tempfile::tempdir().unwrap();
    let out = hkr(&["graphs", "1", "2", "0"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema"], "hkr-report/1");
    assert_eq!(r["result"]["count"], 1);
    assert_eq!(r["result"]["graphs"][0]["graph"]["edges"], serde_json::json!([[1, 2], [1, 3]]));
}

#[test]
fn graphs_without_aerial_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let r = report(&hkr(&["graphs", "0", "2", "0", "--tags"], dir.path()));
    assert_eq!(r["result"]["count"], 1);
    assert_eq!(r["result"]["graphs"][0]["graph"]["edges"], serde_json::json!([]));
}

#[test]
fn closed_wheel_weights() {
    let dir = tempfile::tempdir().unwrap();
    let r = report(&hkr(&["weights", "closed", "4"], dir.path()));
    let w = &r["result"]["weights"];
    assert_eq!(w[0]["weight"], "1/24");
    assert_eq!(w[1]["weight"], "1/1440");
}

#[test]
fn cached_estimate_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--samples", "20000", "weights", "mc", "--wheel", "2", "--cache", "w.jsonl"];
    let first = hkr(&args, dir.path());
    assert_eq!(first.status.code(), Some(0));
    let second = hkr(&args, dir.path());
    assert!(String::from_utf8_lossy(&second.stderr).contains("served from cache"));
    assert_eq!(without_timings(report(&first)), without_timings(report(&second)));
}

#[test]
fn corrupt_cache_is_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("w.jsonl"), "not json\n").unwrap();
    let args = ["--samples", "20000", "weights", "mc", "--gamma0", "2", "--cache", "w.jsonl"];
    let out = hkr(&args, dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let integral = report(&out)["result"]["estimate"]["integral"].as_f64().unwrap();
    assert!((integral - 0.5).abs() < 1e-12);
    let again = hkr(&args, dir.path());
    assert!(String::from_utf8_lossy(&again.stderr).contains("served from cache"));
}

#[test]
fn reports_are_stable_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let run = |w: &str| {
        let args = ["--samples", "30000", "--workers", w, "weights", "mc", "--wheel", "2", "--cache", w];
        let mut v = without_timings(report(&hkr(&args, dir.path())));
        v["config"].as_object_mut().unwrap().remove("workers");
        v["result"]["estimate"].as_object_mut().unwrap().remove("workers");
        v
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn verify_small_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["gerstenhaber", "derivation", "closed-form", "twisting", "todd", "hkr", "wheel-weights", "wheel-classification"] {
        let out = hkr(&["verify", suite, "--instances", "4"], dir.path());
        assert_eq!(out.status.code(), Some(0), "suite {suite}");
        assert_eq!(report(&out)["passed"], true, "suite {suite}");
    }
}

#[test]
fn formality_and_toy_twist_pass() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(report(&hkr(&["formality", "--indices", "1,3"], dir.path()))["passed"], true);
    assert_eq!(report(&hkr(&["twist", "--toy"], dir.path()))["passed"], true);
}

#[test]
fn report_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = hkr(&["--out", "r.json", "todd", "--order", "6"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["result"]["todd"][1], "1/2");
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(hkr(&["verify", "nonsense"], dir.path()).status.code(), Some(2));
    assert_eq!(hkr(&["graphs", "1", "0", "-3"], dir.path()).status.code(), Some(2));
    assert_eq!(hkr(&["formality", "--indices", "0"], dir.path()).status.code(), Some(2));
    std::fs::write(dir.path().join("g.json"), "{\"n\": 1}").unwrap();
    assert_eq!(hkr(&["weights", "mc", "--graph", "g.json"], dir.path()).status.code(), Some(2));
}
