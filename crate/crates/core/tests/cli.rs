use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-rigid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["validate", &fixture("p2.json")]).status.code(), Some(0));
    assert_eq!(cli(&["validate", &fixture("quadrant.json")]).status.code(), Some(1));
    assert_eq!(cli(&["validate", &fixture("malformed.json")]).status.code(), Some(3));
    assert_eq!(cli(&["validate", &fixture("does-not-exist.json")]).status.code(), Some(3));
    assert_eq!(cli(&["atlas", &fixture("p2.json"), "--prime", "4"]).status.code(), Some(1));
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(3));
    let mismatched = cli(&["multiply", &fixture("element_f.json"), &fixture("element_torus.json")]);
    assert_eq!(mismatched.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&mismatched.stderr).starts_with("error:"));
}

#[test]
fn tiny_search_bound_is_inconclusive() {
    let out = cli(&["atlas", &fixture("hirzebruch2.json"), "--bound", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("inconclusive"));
    assert_eq!(cli(&["atlas", &fixture("hirzebruch2.json"), "--bound", "0"]).status.code(), Some(1));
}

#[test]
fn violations_are_reported() {
    let out = cli(&["validate", &fixture("quadrant.json")]);
    let v = json(&out);
    assert_eq!(v["valid"], false);
    assert_eq!(v["violations"].as_array().unwrap().len(), 3);
    assert!(v["violations"].as_array().unwrap().iter().all(|x| x["axiom"] == "face_closure"));
}

#[test]
fn validate_is_a_fixpoint() {
    let dir = tempfile::tempdir().unwrap();
    let once = dir.path().join("once.json");
    let out = cli(&["validate", &fixture("quadrant_completed.json"), "-o", once.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let first = std::fs::read_to_string(&once).unwrap();
    let second = stdout(&cli(&["validate", once.to_str().unwrap()]));
    assert_eq!(first, second);
}

#[test]
fn examples_round_trip_through_validate() {
    for args in [["example", "projective", "3"], ["example", "hirzebruch", "2"], ["example", "torus", "2"]] {
        let printed = cli(&args);
        assert_eq!(printed.status.code(), Some(0));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fan.json");
        std::fs::write(&path, &printed.stdout).unwrap();
        assert_eq!(stdout(&cli(&["validate", path.to_str().unwrap()])), stdout(&printed));
    }
}

#[test]
fn hirzebruch_atlas_generators() {
    let v = json(&cli(&["atlas", &fixture("hirzebruch2.json")]));
    assert_eq!(v["prime"], 5);
    assert_eq!(v["charts"].as_array().unwrap().len(), 9);
    let chart = |id: &str| {
        let c = v["charts"].as_array().unwrap().iter().find(|c| c["id"] == id).unwrap();
        let mut g: Vec<Vec<i64>> = serde_json::from_value(c["generators"].clone()).unwrap();
        g.sort();
        g
    };
    assert_eq!(chart("sigma3"), vec![vec![-2, -1], vec![-1, 0]]);
    assert_eq!(chart("sigma4"), vec![vec![-1, 0], vec![2, 1]]);
    assert_eq!(v["consistency"]["localizations_agree"], true);
    assert_eq!(v["consistency"]["functorial"], true);
}

#[test]
fn reduce_matches_toric_scheme() {
    for p in ["2", "3", "5", "7"] {
        let v = json(&cli(&["reduce", &fixture("p2.json"), "--prime", p]));
        assert_eq!(v["matches_toric_scheme"], true);
        assert_eq!(v["prime"].to_string(), p);
        assert_eq!(v["charts"].as_array().unwrap().len(), 7);
        assert_eq!(v["immersions"].as_array().unwrap().len(), 12);
    }
}

#[test]
fn render_counts() {
    let svg = stdout(&cli(&["render", &fixture("hirzebruch1.json"), "--size", "300"]));
    assert_eq!(svg.matches(r#"class="sector""#).count(), 4);
    assert_eq!(svg.matches(r#"class="ray""#).count(), 4);
    assert!(svg.contains(r#"width="300""#));
    assert_eq!(cli(&["render", &fixture("p3.json")]).status.code(), Some(1));
}

#[test]
fn norm_and_multiply() {
    assert_eq!(stdout(&cli(&["norm", &fixture("element_f.json")])), "1\n");
    assert_eq!(stdout(&cli(&["norm", &fixture("element_zero.json")])), "0\n");
    assert_eq!(stdout(&cli(&["norm", &fixture("element_f.json"), "--prime", "3"])), "1\n");
    let v = json(&cli(&["multiply", &fixture("element_sum.json"), &fixture("element_difference.json")]));
    let terms: Vec<(Vec<i64>, String)> = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (serde_json::from_value(t["exp"].clone()).unwrap(), t["num"].as_str().unwrap().to_owned()))
        .collect();
    assert_eq!(terms, vec![(vec![0, 2], "-1".to_owned()), (vec![2, 0], "1".to_owned())]);
}

#[test]
fn seeded_checks_pass_and_repeat() {
    let a = cli(&["check", "--count", "10", "--seed", "7"]);
    let b = cli(&["check", "--count", "10", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("FAIL"));
}
