use std::path::Path;
use std::process::Command;

use projkit::cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use serde_json::Value;

fn run_args(args: &[&str]) -> i32 {
    run(std::iter::once("projkit").chain(args.iter().copied()))
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn listing_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("list.json");
    assert_eq!(run_args(&["example", "list", "--json", out.to_str().unwrap()]), EXIT_PASS);
    let v = read_json(&out);
    assert_eq!(v["schema"], "projkit-report/1");
    assert!(v["entries"].as_array().unwrap().len() > 20);
}

#[test]
fn example_run_writes_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let code = run_args(&["example", "run", "3.5", "--param", "theta=0.6", "--trunc", "12", "--json", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    let v = read_json(&out);
    assert_eq!(v["id"], "3.5");
    assert_eq!(v["pass"], true);
    assert_eq!(v["params"]["theta"], 0.6);
}

#[test]
fn usage_errors_exit_two_and_still_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.json");
    let o = out.to_str().unwrap();
    for args in [
        vec!["example", "run", "9.9", "--json", o],
        vec!["example", "run", "5.5", "--json", o],
        vec!["example", "run", "3.5", "--param", "phi=1", "--json", o],
        vec!["bounds", "verify", "--case", "III", "--json", o],
        vec!["example", "run", "3.3", "--trunc", "4", "--json", o],
    ] {
        let _ = std::fs::remove_file(&out);
        assert_eq!(run_args(&args), EXIT_USAGE, "{args:?}");
        let v = read_json(&out);
        assert_eq!(v["pass"], false);
        assert!(v["error"].as_str().is_some());
    }
}

#[test]
fn malformed_command_lines_exit_two() {
    assert_eq!(run_args(&["example", "frobnicate"]), EXIT_USAGE);
    assert_eq!(run_args(&["bounds", "verify"]), EXIT_USAGE);
    assert_eq!(run_args(&["--seed", "x", "suite", "all"]), EXIT_USAGE);
}

#[test]
fn failed_checks_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.json");
    let code = run_args(&["pairs", "table", "--s", "0.5", "--t", "1", "--json", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAIL);
    assert_eq!(read_json(&out)["pass"], false);
}

#[test]
fn bounds_verify_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.json");
    let csv = dir.path().join("b.csv");
    let code = run_args(&[
        "bounds",
        "verify",
        "--case",
        "II",
        "--grid",
        "theta=1.0;t1=0.3;t2=0.2,0.5",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_PASS);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    let v = read_json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert!(v["max_gap"].as_f64().unwrap() <= 1e-4);
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "seed = 5\ntrunc = 4\n\n[tolerances]\neps_floor = 0.02\n").unwrap();
    let out = dir.path().join("c.json");
    let (c, o) = (cfg.to_str().unwrap(), out.to_str().unwrap());
    assert_eq!(run_args(&["--config", c, "example", "run", "3.3", "--json", o]), EXIT_USAGE);
    assert_eq!(run_args(&["--config", c, "--trunc", "10", "example", "run", "3.3", "--json", o]), EXIT_PASS);
    std::fs::write(&cfg, "trunc = \"many\"\n").unwrap();
    assert_eq!(run_args(&["--config", c, "example", "run", "3.3", "--json", o]), EXIT_USAGE);
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let code = run_args(&["--seed", "9", "example", "run", "3.7", "--json", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_PASS);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn binary_prints_the_report_to_stdout() {
    let out = Command::new(env!("CARGO_BIN_EXE_projkit")).args(["example", "run", "4.13c"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["id"], "4.13c");
    let bad = Command::new(env!("CARGO_BIN_EXE_projkit")).args(["example", "run", "nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    let v: Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(v["pass"], false);
}
