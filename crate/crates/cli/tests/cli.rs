use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn toricq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toricq")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn ok_json(args: &[&str]) -> Value {
    let out = toricq(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    json_of(&out)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn analyze_examples() {
    let v = ok_json(&["analyze", "pyramid"]);
    assert_eq!(v["singular_faces"], 1);
    assert_eq!(v["depth"], 1);
    let v = ok_json(&["analyze", "triangle"]);
    assert!(v["gamma"].as_array().unwrap().iter().all(|g| g["order"] == "1"));
    let v = ok_json(&["analyze", "interval_sqrt2"]);
    assert_eq!(v["quasilattice_rank"], 2);
    assert_eq!(v["is_lattice"], false);
}

#[test]
fn strata_dot_exports() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("p.dot");
    let json = dir.path().join("p.json");
    let out = toricq(&["strata", "pyramid", "--dot", dot.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(text.matches("[label=").count(), 2);
    assert_eq!(text.matches("->").count(), 1);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["strata"][1]["link"]["delta_f"]["normals"].as_array().unwrap().len(), 4);
    assert_eq!(v["local_models"].as_array().unwrap().len(), 1);

    let out = toricq(&["strata", "cube", "--dot", dot.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(text.matches("[label=").count(), 1);
    assert!(!text.contains("->"));
}

#[test]
fn strata_nest_two_levels() {
    let v = ok_json(&["strata", "pyramid_over_pyramid"]);
    assert_eq!(v["depth"], 2);
    let nested = v["strata"].as_array().unwrap().iter().any(|s| {
        s["link"]["report"]["strata"].as_array().is_some_and(|inner| inner.iter().any(|t| t.get("link").is_some()))
    });
    assert!(nested);
}

#[test]
fn link_polytope_feeds_back_through_the_cli() {
    let v = ok_json(&["strata", "pyramid"]);
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "link.json", &v["strata"][1]["link"]["delta_f"].to_string());
    let a = ok_json(&["analyze", &path]);
    assert_eq!(a["n"], 2);
    assert_eq!(a["vertices"], 4);
    assert_eq!(a["singular_faces"], 0);
}

#[test]
fn retract_and_equiv() {
    let v = ok_json(&["retract", "interval", "--point", "1,1"]);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for c in v["retraction"]["x"].as_array().unwrap() {
        assert!((c[0].as_f64().unwrap() - h).abs() < 1e-8);
    }
    assert!((v["retraction"]["xi"][0].as_f64().unwrap() - 0.5).abs() < 1e-8);
    let v = ok_json(&["equiv", "interval", "--points", "1,1", "2,2"]);
    assert_eq!(v["equivalent"], true);
    let v = ok_json(&["equiv", "interval", "--points", "1,1", "1,-1"]);
    assert_eq!(v["equivalent"], false);
}

#[test]
fn error_exit_codes() {
    let out = toricq(&["retract", "pyramid", "--point", "0,0,0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"]["kind"], "outside_domain");

    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.json", r#"{"n": 1, "normals": [["1"], ["-1"]], "offsets": ["0", "1"]}"#);
    let out = toricq(&["analyze", &empty]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"]["kind"], "validation");
    let out = toricq(&["verify", &empty, "--samples", "3"]);
    assert_eq!(out.status.code(), Some(2));

    let out = toricq(&["retract", "interval", "--point", "1,1", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_of(&out)["error"]["kind"], "nonconvergence");

    let out = toricq(&["analyze", "no_such_instance"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gamma_queries() {
    let v = ok_json(&["gamma", "weighted_triangle", "--chart", "0,2"]);
    assert_eq!(v["order"], "2");
    assert_eq!(v["invariant_factors"], serde_json::json!(["2"]));
    let v = ok_json(&["gamma", "interval_sqrt2", "--chart", "0"]);
    assert_eq!(v["order"], "infinite");
    let v = ok_json(&["gamma", "pyramid", "--chart", "0,1,2", "--face", "0,1,2,3"]);
    assert_eq!(v["finite"], true);
}

#[test]
fn verify_is_reproducible() {
    let a = toricq(&["verify", "pyramid", "--samples", "200", "--seed", "7"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    let v = json_of(&a);
    assert_eq!(v["passed"], true);
    let b = toricq(&["verify", "pyramid", "--samples", "200", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_rational_simple_recovers_classical_data() {
    let v = ok_json(&["verify", "square", "--samples", "20"]);
    let rec = v["properties"].as_array().unwrap().iter().find(|p| p["name"] == "rational_recovery").unwrap();
    assert_eq!(rec["passed"], true);
    assert!(rec["skipped"].is_null());
}

#[test]
fn faces_export() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("f.dot");
    let v = ok_json(&["faces", "square", "--dot", dot.to_str().unwrap()]);
    assert_eq!(v["faces"].as_object().unwrap().len(), 9);
    assert!(v["faces"]["[0,1]"]["regular"].as_bool().unwrap());
    let text = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(text.matches("->").count(), 12);
}

#[test]
fn instance_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{
        "name": "sqrt2 interval",
        "field": {"minpoly": ["-2", "0", "1"], "root_interval": ["1", "2"]},
        "n": 1,
        "normals": [["1"], ["-1"]],
        "offsets": ["0", "-1"],
        "quasilattice": [["1"], [["0", "1"]]],
        "seed": 5
    }"#;
    let path = write(dir.path(), "i.json", text);
    let v = ok_json(&["analyze", &path]);
    assert_eq!(v["name"], "sqrt2 interval");
    assert_eq!(v["is_lattice"], false);
}
