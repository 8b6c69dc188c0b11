use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omegalab")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    let v: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    assert_eq!(v["schema"], "omegalab/1");
    (v, out.status.code().unwrap())
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn failing_cubic_exits_one_with_the_witness_face() {
    let path = fixture("failing_cubic.poly");
    let (v, code) = json(&["certify", "--vars", "w,x,y,z", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "criterion-fails");
    let first = &v["k_reports"][0];
    assert_eq!(first["k"], 1);
    assert_eq!(first["disjoint"], "no");
    let mut verts: Vec<Vec<i64>> = serde_json::from_value(first["witness_face"]["vertices"].clone()).unwrap();
    verts.sort();
    assert_eq!(verts, vec![vec![1, 0, 0, 1], vec![1, 0, 1, 0], vec![1, 1, 0, 0]]);
    assert_eq!(v["k_reports"][1]["disjoint"], "yes");
}

#[test]
fn text_and_json_verdicts_agree() {
    let path = fixture("failing_cubic.poly");
    let text = run(&["certify", "--vars", "w,x,y,z", "--file", path.to_str().unwrap()]);
    assert!(stdout(&text).contains("verdict: criterion-fails"));
    assert_eq!(text.status.code(), Some(1));
    let (_, code) = json(&["certify", "--vars", "w,x,y,z", "--file", path.to_str().unwrap(), "--jobs", "3"]);
    assert_eq!(code, 1);
}

#[test]
fn quadric_is_smooth_toric() {
    let (v, code) = json(&["certify", "--vars", "x1,x2,x3", "x1*x2+x1*x3+x2*x3"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "smooth-toric");
    let mut verts: Vec<Vec<i64>> = serde_json::from_value(v["polytope"]["vertices"].clone()).unwrap();
    verts.sort();
    assert_eq!(verts, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
}

#[test]
fn non_mconvex_support_is_not_applicable() {
    let (v, code) = json(&["certify", "x1*x2^2 + x3^3"]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "not-applicable");
}

#[test]
fn missing_input_is_a_usage_error() {
    let out = run(&["certify"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no polynomial"));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
}

#[test]
fn parse_errors_report_the_position() {
    let out = run(&["certify", "--vars", "x,y", "x^2 + q*y"]);
    assert_eq!(out.status.code(), Some(64));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown variable `q` at position 6"), "{err}");
}

#[test]
fn uniform_matroid_polytopes() {
    let (v, _) = json(&["polytope", "--matroid", "12,13,14,23,24,34", "--function", "bar"]);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 12);
    assert_eq!(v["simple"], true);
    assert_eq!(v["smooth"], true);
    let (v, _) = json(&["polytope", "--matroid", "12,13,14,23,24,34"]);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(v["simple"], false);
    let (v, _) = json(&["polytope", "--matroid", "12,13,14,23,24,34", "--truncate", "1"]);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
    let (v, _) = json(&["polytope", "--table", "0,0,0,0"]);
    assert_eq!(v["vertices"], serde_json::json!([[0, 0]]));
}

#[test]
fn non_polymatroid_table_is_rejected() {
    let out = run(&["polytope", "--table", "0,2,2,1"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("violating pair S = {1}, T = {1,2}"));
}

#[test]
fn analyze_reports_rho_and_derivatives() {
    let (v, code) = json(&["analyze", "x1*x2+x1*x3+x2*x3"]);
    assert_eq!(code, 0);
    assert_eq!(v["mconvex"], true);
    assert_eq!(v["lorentzian"]["is_lorentzian"], true);
    let rho: Vec<(String, i64)> = v["rho"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["set"].as_str().unwrap().to_string(), e["value"].as_i64().unwrap()))
        .collect();
    for (s, val) in &rho {
        let want = if s.matches(',').count() == 0 { 1 } else { 2 };
        assert_eq!(*val, want, "{s}");
    }
    assert_eq!(rho.len(), 7);

    let (v, _) = json(&["analyze", "x1^2*x2 + x1*x2^2 + x1^2*x3 + x1*x2*x3 + x2^2*x3"]);
    let basis = v["derivatives"][1]["basis"].as_array().unwrap();
    assert_eq!(basis.len(), 3);
    assert!(v["derivatives"][1]["centre_dim"] == 2);
}

#[test]
fn constant_input_is_rejected() {
    let out = run(&["analyze", "--vars", "x", "3"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("constant"));
}

#[test]
fn small_commands() {
    let (v, _) = json(&["mconvex", "--points", "1,1,0;0,0,2"]);
    assert_eq!(v["mconvex"], false);
    assert_eq!(v["violation"]["i"], 3);
    let (v, _) = json(&["lorentzian", "x1*x2 + x3^2"]);
    assert_eq!(v["is_lorentzian"], false);
    let (v, _) = json(&["rank", "x1*x2+x1*x3+x2*x3", "--e", "1,1,1", "--v", "1,1,0"]);
    assert_eq!(v["rank"], 2);
    let (v, _) = json(&["probe-smoothable", "x1*x2*x3 + x1^2*x2", "--trials", "0"]);
    assert_eq!(v["trials"], 0);
    let (v, _) = json(&["probe-smoothable", "x1*x2*x3", "--trials", "3", "--seed", "7"]);
    assert_eq!(v["smooth_toric"], 3);
}
