//! The installed binary: exit codes, error objects and environment handling.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn torictool(args: &[&str]) -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_torictool"));
    c.args(args).env_remove("TORICTOOL_PRECISION");
    c
}

fn run(args: &[&str]) -> Output {
    torictool(args).output().unwrap()
}

fn error_object(out: &Output) -> Value {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    let v: Value = serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("{e}: {text}"));
    v["error"].clone()
}

#[test]
fn success_prints_json_on_stdout() {
    let out = run(&["analyze", &data("torsion_two.phase")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stderr.is_empty());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["torsion"]["tau"], 2);
}

#[test]
fn resonance_flags_reach_the_report() {
    let file = data("two_vectors.phase");
    let out = run(&["resonances", "--coordinate", "2", "--max-degree", "6", &file]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["resonant_multi_indices"], serde_json::json!([[1, 0, 1]]));
}

#[test]
fn classify_example() {
    let out = run(&["classify", &data("impure_four.phase")]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["classification"], "impure_torsion");
}

#[test]
fn parse_errors_exit_with_one_and_a_position() {
    let mut child = torictool(&["analyze", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"symbols sqrt2\nphi 1 = sqrt2 *\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let e = error_object(&out);
    assert_eq!(e["kind"], "parse");
    assert_eq!(e["line"], 2);
    assert_eq!(e["column"], 9);
}

#[test]
fn unreadable_input_and_bad_usage_are_parse_errors() {
    let out = run(&["analyze", &data("missing.phase")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_object(&out)["kind"], "parse");
    let out = run(&["transmogrify"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_object(&out)["kind"], "parse");
}

#[test]
fn precondition_violations_exit_with_two() {
    let out = run(&["resonances", "--coordinate", "4", &data("two_vectors.phase")]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_object(&out)["kind"], "precondition");
    let out = run(&["simplify", &data("two_vectors.phase")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn precision_failures_exit_with_three() {
    let out = run(&["normalize", "--precision", "64", &data("small_divisor.germ")]);
    assert_eq!(out.status.code(), Some(3));
    let e = error_object(&out);
    assert_eq!(e["kind"], "precision");
    assert_eq!(e["exit_code"], 3);
}

#[test]
fn environment_overrides_the_default_precision_only() {
    let file = data("small_divisor.germ");
    let out = torictool(&["normalize", &file]).env("TORICTOOL_PRECISION", "64").output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = torictool(&["normalize", "--precision", "256", &file])
        .env("TORICTOOL_PRECISION", "64")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = torictool(&["normalize", &file]).env("TORICTOOL_PRECISION", "lots").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        vec!["analyze".to_string(), data("simplifiable_four.phase")],
        vec!["normalize".to_string(), data("phase_resonant.germ")],
        vec!["check-commute".to_string(), data("phase_resonant.germ")],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn help_exits_cleanly() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for cmd in ["analyze", "resonances", "classify", "simplify", "normalize", "flow", "check-commute"] {
        assert!(text.contains(cmd), "{cmd}");
    }
}
