use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_maximin-bandits"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

#[test]
fn gamma_from_class_file() {
    let dir = tempfile::tempdir().unwrap();
    let class = dir.path().join("class.json");
    std::fs::write(&class, r#"{"constructor":"k_armed","k":4}"#).unwrap();
    let out = bin()
        .args(["gamma", "--alpha", "0.5", "--class"])
        .arg(&class)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!((v["certificate"]["value"].as_f64().unwrap() - 0.25).abs() < 1e-9);
    assert_eq!(v["verified"], true);
}

#[test]
fn dec_with_named_anchors() {
    let dir = tempfile::tempdir().unwrap();
    let class = dir.path().join("class.json");
    std::fs::write(&class, r#"{"arms":2,"functions":2,"means":[[1,0],[0,1]]}"#).unwrap();
    let out = bin()
        .args(["dec", "--eps", "1.0", "--alpha", "0.5", "--resolution", "0.05", "--anchors", "vertices+midpoints", "--class"])
        .arg(&class)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!((json(&out)["value"].as_f64().unwrap() - 0.5).abs() <= 0.01);
}

#[test]
fn run_writes_table_and_prints_summary() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("trials.csv");
    let out = bin()
        .arg("run")
        .arg("--config")
        .arg(configs().join("algorithm1_tree.json"))
        .args(["--trials", "20", "--seed", "5", "--out"])
        .arg(&table)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["trials"], 20);
    let text = std::fs::read_to_string(&table).unwrap();
    assert_eq!(text.lines().count(), 21);

    let again = bin()
        .arg("run")
        .arg("--config")
        .arg(configs().join("algorithm1_tree.json"))
        .args(["--trials", "20", "--seed", "5"])
        .env("MB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(stdout(&again), text);
}

#[test]
fn discretize_reports_within_bound() {
    let out = bin()
        .args(["discretize", "--mu", "0", "--sigma", "1", "--eps", "0.1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(json(&out)["within_bound"], true);
}

#[test]
fn config_kind_mismatch_is_an_error() {
    let out = bin()
        .arg("certify")
        .arg("--config")
        .arg(configs().join("algorithm1_tree.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn missing_inputs_exit_with_two() {
    let out = bin().args(["discretize", "--mu", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
