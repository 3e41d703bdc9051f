//! End-to-end runs of the binary: exit codes, determinism of written
//! files, and the worked generate/pin/hull pipeline.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_markovhull"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_space(dir: &Path) -> String {
    let path = dir.join("space.json");
    std::fs::write(
        &path,
        r#"{"grid": ["0", "1", "2"], "states": ["0", "1"], "cyclic": false}"#,
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn generate_markovianise_hull_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let space = write_space(dir.path());
    let pair = dir.path().join("pair.json");
    let out = run(&["generate", "--space", &space, "--kind", "correlated-pair", "--output",
        pair.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let pinned = dir.path().join("m1.json");
    let out = run(&["markovianise", "--input", pair.to_str().unwrap(), "--pins", "1",
        "--output", pinned.to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("pin 1: defect 1/2 -> 0"), "stdout: {stdout}");
    let doc: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&pinned).unwrap()).unwrap();
    assert_eq!(doc["atoms"].as_array().unwrap().len(), 4);
    for atom in doc["atoms"].as_array().unwrap() {
        assert_eq!(atom["weight"], "1/4");
    }

    let limit = dir.path().join("limit.json");
    let out = run(&["hull", "--input", pair.to_str().unwrap(), "--output",
        limit.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read(&limit).unwrap(), std::fs::read(&pinned).unwrap());
    let report: serde_json::Value = serde_json::from_slice(
        &std::fs::read(dir.path().join("limit.report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["verified"], true);
    assert_eq!(report["is_strong_markov"], true);
    let trace = std::fs::read_to_string(dir.path().join("limit.trace.csv")).unwrap();
    assert!(trace.starts_with("step,pin,"));
    assert!(trace.lines().count() >= 2);
}

#[test]
fn empty_pin_list_is_canonical_identity() {
    let dir = tempfile::tempdir().unwrap();
    let space = write_space(dir.path());
    let pair = dir.path().join("pair.json");
    run(&["generate", "--space", &space, "--kind", "correlated-pair", "--output",
        pair.to_str().unwrap()]);
    let copy = dir.path().join("copy.json");
    let out = run(&["markovianise", "--input", pair.to_str().unwrap(), "--output",
        copy.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&pair).unwrap(), std::fs::read(&copy).unwrap());
}

#[test]
fn equal_seeds_write_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let space = write_space(dir.path());
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, seed) in [(&a, "11"), (&b, "11")] {
        let out = run(&["generate", "--space", &space, "--kind", "chain", "--seed", seed,
            "--mode", "float", "--output", path.to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let c = dir.path().join("c.json");
    run(&["generate", "--space", &space, "--kind", "chain", "--seed", "12", "--mode", "float",
        "--output", c.to_str().unwrap()]);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn non_convergence_exits_two_but_still_writes() {
    let dir = tempfile::tempdir().unwrap();
    let space = write_space(dir.path());
    let pair = dir.path().join("pair.json");
    run(&["generate", "--space", &space, "--kind", "correlated-pair", "--output",
        pair.to_str().unwrap()]);
    let stall = dir.path().join("stall.json");
    let out = run(&["hull", "--input", pair.to_str().unwrap(), "--max-steps", "0",
        "--output", stall.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stall.exists());
    let report: serde_json::Value = serde_json::from_slice(
        &std::fs::read(dir.path().join("stall.report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["converged"], false);
}

#[test]
fn corrupt_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"space": {"grid": ["0", "1", "2"], "states": ["0", "1"], "cyclic": false},
            "mode": "exact",
            "atoms": [{"path": ["0", "0", "0"], "weight": "-1/2"}]}"#,
    )
    .unwrap();
    let out = run(&["info", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());

    let out = run(&["markovianise", "--input", "/nonexistent.json", "--output",
        dir.path().join("x.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn enum_cap_env_var_limits_info() {
    let dir = tempfile::tempdir().unwrap();
    let space = write_space(dir.path());
    let out = bin()
        .args(["info", "--space", &space])
        .env("MARKOVHULL_ENUM_CAP", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("not counted"));

    let out = bin()
        .args(["info", "--space", &space])
        .env("MARKOVHULL_ENUM_CAP", "frogs")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn check_exit_codes_follow_results() {
    let out = run(&["check", "--suite", "invariance", "--cases", "4", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc.as_array().unwrap().iter().all(|r| r["passed"] == true));

    let out = run(&["check", "--cases", "0"]);
    assert_eq!(out.status.code(), Some(1));
}
