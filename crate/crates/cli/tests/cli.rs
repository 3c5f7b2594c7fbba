use std::path::PathBuf;
use std::process::{Command, Output};

fn inputs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../inputs")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equivol")).args(args).args(["--no-cache"]).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn c4_input_gives_the_printed_volume() {
    let file = inputs().join("c4_example.json");
    let o = run(&["residue", "--input", file.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "1/2 / (tau1*tau2)");
}

#[test]
fn basic_input_gives_half_over_tau() {
    let file = inputs().join("basic_example.json");
    let o = run(&["volume", "--input", file.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1/2 / tau");
}

#[test]
fn paper_examples_suite_passes() {
    let o = run(&["check", "--suite", "paper-examples"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn json_output_is_deterministic() {
    let args = ["volume", "--group", "su", "--n", "2", "--charge", "2", "--format", "json"];
    let a = run(&args);
    let b = run(&[&args[..], &["--jobs", "1"]].concat());
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "equivol.rational-function/1");
}

#[test]
fn cached_and_uncached_runs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["series", "--group", "su", "--n", "2", "--kmax", "2", "--format", "json"];
    let cold = run(&args);
    let bin = env!("CARGO_BIN_EXE_equivol");
    let first = Command::new(bin).args(args).args(["--cache-dir", d]).output().unwrap();
    let warm = Command::new(bin).args(args).args(["--cache-dir", d]).output().unwrap();
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    assert_eq!(cold.stdout, first.stdout);
    assert_eq!(cold.stdout, warm.stdout);
}

#[test]
fn latex_output() {
    let o = run(&["volume", "--group", "su", "--n", "2", "--charge", "1", "--format", "latex"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("\\frac{2}{") && s.contains("\\varepsilon_{1}"), "{s}");
}

#[test]
fn prepotential_of_the_abelian_series() {
    let o = run(&["series", "--group", "su", "--n", "1", "--kmax", "3", "--prepotential", "--assign", "eps1=2,eps2=3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.lines().count() >= 4, "{s}");
}

#[test]
fn exit_codes() {
    // Validation: unknown group, conflicting sources, bad assignment syntax.
    assert_eq!(run(&["volume", "--group", "e8", "--n", "1", "--charge", "1"]).status.code(), Some(1));
    let file = inputs().join("c4_example.json");
    let both = run(&["volume", "--group", "su", "--n", "1", "--charge", "1", "--input", file.to_str().unwrap()]);
    assert_eq!(both.status.code(), Some(1));
    assert_eq!(run(&["volume", "--group", "su", "--n", "1", "--charge", "1", "--assign", "eps1"]).status.code(), Some(1));
    assert_eq!(run(&["volume", "--input", "/nonexistent.json"]).status.code(), Some(1));
    // Computation: evaluation at a pole.
    let pole = run(&["volume", "--group", "su", "--n", "1", "--charge", "1", "--assign", "eps1=0,eps2=1"]);
    assert_eq!(pole.status.code(), Some(2), "{}", String::from_utf8_lossy(&pole.stderr));
    // Argument errors from the parser.
    assert_eq!(run(&["volume", "--jobs", "0", "--group", "su", "--n", "1", "--charge", "1"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn residue_orders_agree() {
    let base = ["volume", "--group", "su", "--n", "2", "--charge", "2"];
    let a = run(&[&base[..], &["--order", "sigma1,sigma2"]].concat());
    let b = run(&[&base[..], &["--order", "sigma2,sigma1"]].concat());
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let bad = run(&[&base[..], &["--order", "sigma1"]].concat());
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn trace_and_export() {
    let t = run(&["trace", "--group", "su", "--n", "1", "--charge", "2"]);
    assert!(t.status.success());
    assert!(stdout(&t).contains("res+ over"));
    let e = run(&["export", "--group", "sp", "--n", "1", "--charge", "2"]);
    assert!(e.status.success());
    let v: serde_json::Value = serde_json::from_slice(&e.stdout).unwrap();
    assert!(v["schema"].as_str().unwrap().contains("weight-system"));
}
