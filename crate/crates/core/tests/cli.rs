use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn adv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adv"))
        .args(args)
        .env("ADVLAB_FIXTURES", fixtures())
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn compute_writes_a_witness_that_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let or2 = fixtures().join("or2.json");
    let out = adv(&["compute", "--function", or2.to_str().unwrap(), "--out", w.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out)["value"].as_f64().unwrap();
    assert!((v - 2f64.sqrt()).abs() < 1e-4);

    let ok = adv(&["verify", "--witness", w.to_str().unwrap(), "--function", "or2"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["valid"], Value::Bool(true));

    let wrong = adv(&["verify", "--witness", w.to_str().unwrap(), "--function", "and2"]);
    assert_eq!(wrong.status.code(), Some(1));
}

#[test]
fn relational_witness_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let out = adv(&["rel-compute", "--relation", "findone2", "--out", w.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["value"].as_f64().unwrap() - 1.0).abs() < 1e-4);
    let ok = adv(&["verify", "--witness", w.to_str().unwrap(), "--relation", "findone2"]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn gamma2_of_a_matrix_file() {
    let m = fixtures().join("or2-disagreement-matrix.json");
    let out = adv(&["gamma2", "--matrix", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["value"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-4);
}

#[test]
fn compose_emits_a_report() {
    let out = adv(&["compose", "--relation", "findone2", "--inner", "and2", "--direct"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["pass"], Value::Bool(true));
    for key in ["lower_value", "upper_value", "direct_value"] {
        assert!((r[key].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-2, "{key}");
    }
    assert!(r["checks"].as_array().unwrap().iter().any(|c| c["name"] == "claim_identity"));

    let func = adv(&["compose", "--function", "or2", "--inner", "and2", "--format", "markdown"]);
    assert_eq!(func.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&func.stdout).contains("product_equality"));
}

#[test]
fn exit_codes() {
    assert_eq!(adv(&["compute", "--function", "no-such-thing"]).status.code(), Some(2));
    assert_eq!(adv(&["compute", "--function", "parity2", "--max-dim", "8"]).status.code(), Some(3));
    assert_eq!(adv(&["report", "--scenario", "no-such-scenario"]).status.code(), Some(2));
    assert_eq!(adv(&["compose", "--relation", "findone2"]).status.code(), Some(2));
}

#[test]
fn fixture_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("mine.json"), r#"{"arity":1,"table":[1,0]}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_adv"))
        .args(["compute", "--function", "mine"])
        .env("ADVLAB_FIXTURES", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["value"].as_f64().unwrap() - 1.0).abs() < 1e-4);
}

#[test]
fn report_runs_named_scenarios() {
    let list = adv(&["report", "--list"]);
    let names = String::from_utf8_lossy(&list.stdout);
    assert!(names.lines().any(|l| l == "compose-parity-parity-rel"));
    let out = adv(&["report", "--scenario", "adv-or2", "--scenario", "rel-allpairs2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["scenarios"].as_array().unwrap().len(), 2);
    assert_eq!(r["scenarios"][0]["name"], "adv-or2");
}
