use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ggt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ggt"))
        .args(args)
        .env_remove("GGT_BUDGET_SCALE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn write_config(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).expect("temp dir is writable");
    path
}

#[test]
fn stallings_membership() {
    let o = ggt(&["stallings", "--gens", "aa,ab,aB", "--word", "baaB", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["member"], true);
    assert_eq!(v["subgroup_rank"], 3);
    let o = ggt(&["stallings", "--gens", "aa,bb", "--word", "ab"]);
    assert!(stdout(&o).contains("ab is not in the subgroup"));
}

#[test]
fn malnormal_scan_reports_violation() {
    let o = ggt(&[
        "malnormal",
        "--gens",
        "aa,ab,aB",
        "--radius",
        "1",
        "--cap",
        "3",
        "--json",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    let violations = v["violations"].as_array().unwrap();
    assert!(violations.iter().any(|x| x["x"] == "b"));
    let o = ggt(&["malnormal", "--gens", "ab", "--radius", "2", "--cap", "4", "--json"]);
    assert!(json(&o)["violations"].as_array().unwrap().is_empty());
}

#[test]
fn dhat_values() {
    let o = ggt(&["dhat", "--genus", "3", "--h", "abAB", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["dhat"]["value"], 2);
    assert!(v["geodesics"]
        .as_array()
        .unwrap()
        .contains(&serde_json::json!(["", "C", "CC"])));
    let o = ggt(&["dhat-ball", "--genus", "5", "--r", "5", "--radius", "6", "--json"]);
    let v = json(&o);
    assert_eq!(v["elements"].as_array().unwrap().len(), 1);
    let o = ggt(&["dhat-ball", "--genus", "3", "--r", "1", "--radius", "3", "--dot"]);
    assert!(stdout(&o).starts_with("graph") || stdout(&o).starts_with("digraph"));
}

#[test]
fn quasimorphism_commands() {
    let o = ggt(&["qm-eval", "--pattern", "ab", "--word", "abab"]);
    assert_eq!(stdout(&o), "2\n");
    let o = ggt(&["qm-defect", "--pattern", "ab", "--maxlen", "4", "--json"]);
    assert_eq!(json(&o)["estimate"]["value"], "1");
    let a = ggt(&[
        "qm-defect",
        "--pattern",
        "abAB",
        "--maxlen",
        "6",
        "--seed",
        "7",
        "--json",
    ]);
    let b = ggt(&[
        "qm-defect",
        "--pattern",
        "abAB",
        "--maxlen",
        "6",
        "--seed",
        "7",
        "--json",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn transfer_commands() {
    let model = write_config(
        "model.toml",
        "lambda = 0.5\n\
         [[region]]\nid = \"complement\"\nmeasure = 0.25\ntransform = \"trivial\"\n\
         [[region]]\nid = \"A_eps\"\nmeasure = 0.5\n\
         [[region]]\nid = \"A_eps^a\"\nmeasure = 0.1\ntransform = \"h_a\"\n\
         [[region]]\nid = \"A_eps^b\"\nmeasure = 0.1\ntransform = \"h_b\"\n\
         [[region]]\nid = \"B_eps\"\nmeasure = 0.05\ntransform = \"trivial\"\n",
    );
    let o = ggt(&[
        "ggh-eval",
        "--model",
        model.to_str().unwrap(),
        "--pattern",
        "ab",
        "--tuple",
        "abAB",
        "--json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!((json(&o)["value"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let o = ggt(&["ggh-lemma", "--schedule", "default", "--steps", "10", "--json"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["all_hold"], true);
    assert_eq!(ggt(&["ggh-lemma", "--schedule", "other"]).status.code(), Some(2));
}

#[test]
fn homomorphism_verification() {
    let bad = write_config(
        "bad.toml",
        "images = [\"a\", \"b\", \"\", \"\", \"\"]\n[source]\nsurface = 5\n[target]\nrank = 2\n",
    );
    let o = ggt(&["verify-hom", "--spec", bad.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["verdict"], "refuted");
    assert_eq!(v["image"], "abAB");
    let good = write_config(
        "good.toml",
        "images = [\"a\", \"b\", \"ba\", \"ABa\", \"A\"]\n[source]\nsurface = 5\n[target]\nrank = 2\n",
    );
    let inclusion = write_config(
        "inclusion.toml",
        "images = [\"a\", \"b\"]\n[source]\nrank = 2\n[target]\nsurface = 5\n",
    );
    let o = ggt(&[
        "verify-hom",
        "--spec",
        good.to_str().unwrap(),
        "--inclusion",
        inclusion.to_str().unwrap(),
        "--json",
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(json(&o)["verdict"], "verified");
}

#[test]
fn case_reports_and_exit_codes() {
    let a = ggt(&["case", "--case", "brooks-suite", "--seed", "7", "--cap", "4", "--json"]);
    let b = ggt(&["case", "--case", "brooks-suite", "--seed", "7", "--cap", "4", "--json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["schema_version"], 1);
    let o = ggt(&["evidence", "--case", "f2-in-f4", "--radius", "5", "--cap", "4"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = ggt(&["evidence", "--case", "g3", "--radius", "5", "--cap", "4", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["passed"], false);
    let growth = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "dhat_ball_growth")
        .unwrap();
    assert_eq!(growth["passed"], false);
}

#[test]
fn usage_errors() {
    assert_eq!(ggt(&["case", "--case", "brooks-suite"]).status.code(), Some(2));
    assert_eq!(ggt(&["evidence", "--case", "nowhere"]).status.code(), Some(2));
    assert_eq!(
        ggt(&["evidence", "--case", "g3", "--radius", "12"]).status.code(),
        Some(2)
    );
    assert_eq!(ggt(&["qm-eval", "--pattern", "", "--word", "a"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_ggt"))
        .args(["qm-eval", "--pattern", "a", "--word", "a"])
        .env("GGT_BUDGET_SCALE", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_ggt"))
        .args(["qm-eval", "--pattern", "a", "--word", "a"])
        .env("GGT_BUDGET_SCALE", "3/2")
        .output()
        .unwrap();
    assert!(o.status.success());
}
