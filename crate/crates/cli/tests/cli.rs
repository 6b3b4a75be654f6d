use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_screenwave"))
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

const SWEEP: &str = r#"{"ka": 100, "epsilon": 0.05, "m": 31, "absorption": 0,
    "theta_scan": {"min": 0.001, "max": 0.3, "count": 12, "spacing": "log"}}"#;

#[test]
fn scan_writes_a_deterministic_table_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "sweep.json", SWEEP);
    let out = dir.path().join("sweep.csv");
    let o = run(&["scan", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--svg", "--jobs", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# screenwave asymptotic table");
    assert!(lines[1].starts_with("# config_sha256: ") && lines[1].len() == 17 + 64);
    assert!(lines[2].starts_with("# versions: screenwave "));
    let header = lines.iter().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header.split(',').count(), 17);
    let rows: Vec<&str> = lines.iter().filter(|l| !l.starts_with('#')).skip(1).copied().collect();
    // 12 slopes, each over orders -4..=15
    assert_eq!(rows.len(), 12 * 20);
    assert!(rows.iter().all(|r| r.split(',').count() == 17));
    assert!(rows[0].starts_with("1.0000000000000000e-3,-4,39,"));
    let svg = std::fs::read_to_string(dir.path().join("sweep.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("polyline"));

    let again = run(&["scan", "--config", cfg.to_str().unwrap()]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("none.json");
    assert_eq!(code(&run(&["scan", "--config", missing.to_str().unwrap()])), 2);

    let broken = write(dir.path(), "broken.json", "{\"ka\": 100,\n \"epsilon\": }");
    let o = run(&["scan", "--config", broken.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let empty = write(dir.path(), "empty.json", &SWEEP.replace("\"count\": 12", "\"count\": 0"));
    let out = dir.path().join("empty.csv");
    assert_eq!(code(&run(&["scan", "--config", empty.to_str().unwrap(), "--out", out.to_str().unwrap()])), 2);
    assert!(!out.exists());

    let cfg = write(dir.path(), "sweep.json", SWEEP);
    assert_eq!(code(&run(&["scan", "--config", cfg.to_str().unwrap(), "--jobs", "0"])), 2);
    assert_eq!(code(&run(&["scan", "--config", cfg.to_str().unwrap(), "--svg"])), 2);
    assert_eq!(code(&run(&["scan"])), 2);
    // the oracle needs absorption
    assert_eq!(code(&run(&["oracle", "--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn strict_scan_fails_on_validity_warnings() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "wide.json", &SWEEP.replace("\"max\": 0.3", "\"max\": 0.5"));
    let out = dir.path().join("wide.csv");
    let o = run(&["scan", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--strict"]);
    assert_eq!(code(&o), 4);
    assert!(std::fs::read_to_string(&out).unwrap().contains("# warning theta_in=5.0000000000000000e-1: validity_ceiling"));
}

#[test]
fn oracle_on_a_closed_screen_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "closed.json",
        &SWEEP.replace("\"epsilon\": 0.05", "\"epsilon\": 0").replace("\"absorption\": 0", "\"absorption\": 0.001"),
    );
    let o = run(&["oracle", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    for row in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let f: Vec<&str> = row.split(',').collect();
        let t2_re: f64 = f[9].parse().unwrap();
        assert_eq!(t2_re, if f[1] == "0" { 1.0 } else { 0.0 });
    }
}

#[test]
fn strict_oracle_flags_a_wide_gap() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "wide.json",
        r#"{"ka": 100, "epsilon": 0.2, "m": 31, "absorption": 0.001,
            "theta_scan": {"min": 0.03, "max": 0.06, "count": 2, "spacing": "linear"},
            "simulator": {"half_width": 10, "steps_per_width": 8, "cells": 40}}"#,
    );
    let out = dir.path().join("wide.csv");
    let o = run(&["oracle", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--strict", "--svg"]);
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# screenwave simulator table"));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header.split(',').count(), 23);
    assert!(dir.path().join("wide.svg").exists());
}

#[test]
fn validate_filters_and_reports() {
    let o = run(&["validate", "--filter", "polylog"]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let criteria = report["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 1);
    assert_eq!(criteria[0]["id"], 6);
    assert_eq!(report["passed"], true);
    assert_eq!(code(&run(&["validate", "--filter", "no-such-check"])), 2);
}

#[test]
fn branch_perturbation_breaks_the_closed_limit() {
    let o = run(&["validate", "--filter", "closed-limit"]);
    assert_eq!(code(&o), 0);
    let o = run(&["validate", "--filter", "closed-limit", "--perturb-branch"]);
    assert_eq!(code(&o), 4);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["criteria"][0]["passed"], false);
}
