use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbital-forge"))
        .args(args)
        .env_remove("ORBITAL_FORGE_MAX_VERTICES")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn payload(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).expect("json envelope");
    v["payload"].clone()
}

#[test]
fn validate_exit_codes() {
    let ok = run(&["validate", &fixture("ex1.toml")]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("m=2, |Δ|=3"));

    let c4 = run(&["validate", &fixture("c4.toml")]);
    assert_eq!(c4.status.code(), Some(2));
    assert!(stderr(&c4).contains("lobe group imprimitive"));
    assert!(stderr(&c4).contains("[0, 2]"));

    let bad = run(&["validate", &fixture("malformed.toml")]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("line 5"));

    let missing = run(&["validate", "/nonexistent/spec.toml"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn expand_counts() {
    let r1 = run(&["expand", &fixture("ex1.toml"), "--radius", "1"]);
    let ball: Value = serde_json::from_slice(&r1.stdout).unwrap();
    assert_eq!(ball["vertices"].as_array().unwrap().len(), 5);
    assert_eq!(ball["arcs"].as_array().unwrap().len(), 12);

    let r0 = run(&["expand", &fixture("ex1.toml"), "--radius", "0"]);
    let ball: Value = serde_json::from_slice(&r0.stdout).unwrap();
    assert_eq!(ball["vertices"].as_array().unwrap().len(), 1);
    assert!(ball["arcs"].as_array().unwrap().is_empty());

    let dir = std::env::temp_dir().join(format!("orbital-forge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ex2.dot");
    let out = run(&[
        "expand",
        &fixture("ex2.toml"),
        "--radius",
        "2",
        "--format",
        "dot",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let dot = std::fs::read_to_string(&path).unwrap();
    let nodes = dot.lines().filter(|l| l.trim_start().starts_with('n') && !l.contains("->")).count();
    assert_eq!(nodes, 1 + 4 + 12);
    let arcs: Vec<&str> = dot.lines().filter(|l| l.contains("->")).collect();
    assert!(!arcs.is_empty() && arcs.iter().all(|l| l.contains("label=\"") && l.contains('#')));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn capacity_exit_code() {
    let over = run(&["expand", &fixture("ex1.toml"), "--radius", "9"]);
    assert_eq!(over.status.code(), Some(3));
    let capped = Command::new(env!("CARGO_BIN_EXE_orbital-forge"))
        .args(["expand", &fixture("ex1.toml"), "--radius", "4"])
        .env("ORBITAL_FORGE_MAX_VERTICES", "10")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
}

#[test]
fn analyze_reports() {
    let out = run(&["analyze", &fixture("ex1.toml"), "--radius", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let p = payload(&out);
    assert_eq!(p["ends"]["classification"], "Uncountable");
    assert_eq!(p["ends"]["certificate"], serde_json::json!([2, 4, 8]));
    assert_eq!(p["subdegrees"], serde_json::json!([1, 4, 4, 4]));

    let p = payload(&run(&["analyze", &fixture("ex2.toml"), "--radius", "1"]));
    assert_eq!(p["subdegrees"], serde_json::json!([1, 4]));

    let p = payload(&run(&["analyze", &fixture("ex1.toml"), "--radius", "0"]));
    assert_eq!(p["subdegrees"], serde_json::json!([1]));
    assert_eq!(p["ends"]["classification"], "Unresolved");
}

#[test]
fn payloads_are_deterministic() {
    let args = ["analyze", &fixture("ex2.toml"), "--radius", "2"];
    let a: Value = serde_json::from_slice(&run(&args).stdout).unwrap();
    let b: Value = serde_json::from_slice(&run(&args).stdout).unwrap();
    assert_eq!(
        serde_json::to_string(&a["payload"]).unwrap(),
        serde_json::to_string(&b["payload"]).unwrap()
    );
    assert_eq!(a["input_sha256"], b["input_sha256"]);
    assert_eq!(a["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn canonical_commands() {
    let p = payload(&run(&["canonical", &fixture("ex2.toml"), "--enumerate"]));
    assert_eq!(p["count"], 2);

    let p = payload(&run(&["canonical", &fixture("ex2.toml"), "--equiv", "0", "1"]));
    assert_eq!(p["equivalent"], true);

    let out = run(&["canonical", &fixture("ex1.toml"), "--refine", "0.1/1.1"]);
    assert_eq!(out.status.code(), Some(0));
    let p = payload(&out);
    assert!(p["stages"].as_u64().unwrap() <= 2);
    assert!(p["refinement"]["outcome"]["Terminal"]["matched"] == 0);

    let bad = run(&["canonical", &fixture("ex1.toml"), "--equiv", "0", "5"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn verify_fixtures() {
    for f in ["ex1.toml", "ex2.toml"] {
        let out = run(&["verify", &fixture(f)]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("PASS")).count(), 10);
    }
    let out = run(&["--unchecked", "verify", &fixture("square.toml")]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stderr(&out).contains("amalgam_decomposition: maximality"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["expand", &fixture("ex1.toml")]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
