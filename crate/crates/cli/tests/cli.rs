use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.alg"))
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_formality")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8"))
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, out) = run(args);
    (code, serde_json::from_str(&out).expect("JSON report"))
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_passes_on_f1() {
    let (code, r) = run_json(&["check", path(&fixture("F1"))]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["result"]["pass"], true);
    assert_eq!(r["schema"], "formality-report/1");
    assert_eq!(r["tool"]["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn heisenberg_is_non_formal_in_both_complexes() {
    let (code, r) = run_json(&["compare-com-ass", path(&fixture("F2")), "--stage", "4"]);
    assert_eq!(code, 0);
    let rep = &r["result"]["report"];
    for side in ["harrison", "hochschild"] {
        assert_eq!(rep[side]["status"], "nonzero-at");
        assert_eq!(rep[side]["stage"], 3);
    }
    assert_eq!(r["result"]["agreement"], true);
}

#[test]
fn even_sphere_is_certified() {
    let (code, r) = run_json(&["certify", path(&fixture("F4"))]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["verdict"]["status"], "certified-formal");
    let slices = r["result"]["certificate"]["slices"].as_array().unwrap();
    assert!(!slices.is_empty() && slices.iter().all(|s| s["dim"] == 0));
}

#[test]
fn lie_comparison_on_f3() {
    let (code, r) = run_json(&["compare-lie-ass", path(&fixture("F3")), "--weight-bound", "3"]);
    assert_eq!(code, 0);
    let rep = &r["result"]["report"];
    assert_eq!(rep["lie"]["terminal"]["stage"], 3);
    assert_eq!(rep["envelope"]["status"], "nonzero-at");
    assert_eq!(rep["comparison"]["difference_is_coboundary"], true);
    assert_eq!(rep["agreement"], true);
}

#[test]
fn syntax_errors_exit_with_2_and_a_position() {
    let dir = std::env::temp_dir().join(format!("formality-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.alg");
    std::fs::write(&bad, "species com\nname F\nbasis\n  x 1\n  y 1\n  z 1\n  xy 2\nd z = x*y\n").unwrap();
    let (code, r) = run_json(&["check", path(&bad)]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "error");
    assert_eq!(r["error"]["kind"], "syntax");
    assert_eq!(r["error"]["line"], 8);
    assert_eq!(r["error"]["column"], 8);
    let (code, r) = run_json(&["check", path(&dir.join("missing.alg"))]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "input");
}

#[test]
fn species_mismatch_is_an_input_error() {
    let (code, r) = run_json(&["envelope", path(&fixture("F2"))]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "input");
}

#[test]
fn reports_are_byte_deterministic() {
    let dir = std::env::temp_dir().join(format!("formality-det-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (cmd, f) in [("compare-com-ass", "F2"), ("compare-lie-ass", "F3"), ("transfer", "F5"), ("certify", "F4")] {
        for fmt in ["json", "text"] {
            let a = run(&[cmd, path(&fixture(f)), "--format", fmt, "--seed", "9"]);
            let b = run(&[cmd, path(&fixture(f)), "--format", fmt, "--seed", "9"]);
            assert_eq!(a, b, "{cmd} {f} {fmt}");
            let out = dir.join(format!("{cmd}-{fmt}.out"));
            let (code, printed) = run(&[cmd, path(&fixture(f)), "--format", fmt, "--seed", "9", "--out", path(&out)]);
            assert_eq!(code, 0);
            assert!(printed.is_empty());
            assert_eq!(std::fs::read_to_string(&out).unwrap(), a.1);
        }
    }
}

#[test]
fn every_command_runs_on_the_fixtures() {
    let lie = ["F1", "F3", "F3a", "F5", "acyclic"];
    let com = ["F2", "F4"];
    let cases: &[(&str, &[&str])] = &[
        ("check", &["F1", "F2", "F3", "F3a", "F4", "F5", "acyclic"]),
        ("cohomology", &["F1", "F2", "F3", "F4", "F5", "acyclic"]),
        ("transfer", &["F2", "F3", "F4", "F5"]),
        ("obstructions", &["F1", "F2", "F3", "F4", "acyclic"]),
        ("certify", &["F2", "F4", "F5"]),
        ("envelope", &lie),
        ("alt", &["F1", "F3", "F5"]),
        ("harrison-split", &["F4"]),
        ("compare-com-ass", &com),
        ("compare-lie-ass", &lie),
    ];
    for (cmd, fixtures) in cases {
        for f in *fixtures {
            let (code, r) = run_json(&[cmd, path(&fixture(f)), "--arity-bound", "4", "--stage", "3"]);
            assert_eq!(code, 0, "{cmd} {f}: {r}");
            assert_eq!(r["command"], *cmd);
        }
    }
}

#[test]
fn text_reports_show_the_verdict() {
    let (code, out) = run(&["obstructions", path(&fixture("F2")), "--format", "text"]);
    assert_eq!(code, 0);
    assert!(out.contains("status: nonzero-at"));
    assert!(out.contains("stage: 3"));
}
