use std::process::{Command, Output};

use serde_json::Value;

fn pcurv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcurv")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = pcurv(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn sorted_terms(s: &str) -> Vec<String> {
    let body = s.trim().split(" - f_").next().unwrap();
    let mut v: Vec<String> = body.split(" + ").map(str::to_string).collect();
    v.sort();
    v
}

#[test]
fn formula_text_at_three() {
    let out = pcurv(&["formula", "--p", "3", "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(sorted_terms(&text), sorted_terms("T^3 + (t1 T)T + 2 T(t1 T) + (t2 T) - f_{t^3} T"));
    assert!(text.trim().ends_with("- f_{t^3} T"));
}

#[test]
fn formula_json_shape() {
    let v = json(&["formula", "--p", "5"]);
    assert_eq!(v["p"], 5);
    assert_eq!(v["terms"].as_array().unwrap().len(), 16);
    let has = v["terms"].as_array().unwrap().iter().any(|t| t["word"] == serde_json::json!([1, 1, 1, 2]) && t["coeff"] == 4);
    assert!(has);
}

#[test]
fn count_five_on_example_curve() {
    let v = json(&["count", "--p", "5", "--curve", "0,0,0,1,3", "--total"]);
    assert_eq!(v["e_p"], 5);
    assert_eq!(v["general_value"], 5);
    assert_eq!(v["total"], 80);
}

#[test]
fn count_seven_example_with_solutions() {
    let v = json(&["count", "--p", "7", "--curve", "0,0,0,1,3", "--solutions"]);
    assert_eq!(v["e_p"], 14);
    assert_eq!(v["field_degree"], 14);
    assert_eq!(v["solutions"].as_array().unwrap().len(), 14);
}

#[test]
fn count_three_reduces_mod_p() {
    let v = json(&["count", "--p", "3", "--curve", "3,-3,4,0,-1", "--solutions"]);
    assert_eq!(v["e_p"], 1);
    assert_eq!(v["curve"], serde_json::json!([0, 0, 1, 0, 2]));
    assert_eq!(v["solutions"][0]["u0"], "1");
}

#[test]
fn prank_reports_oracle() {
    let v = json(&["prank", "--p", "3", "--curve", "1,1,1,0,1"]);
    assert_eq!(v["agree"], true);
    assert_eq!(v["prank"], v["oracle"]);
}

#[test]
fn prank_strata_lists_three_conditions() {
    let v = json(&["prank-strata", "--p", "5"]);
    assert_eq!(v["rank1"].as_array().unwrap().len(), 2);
    assert!(v["rank2"]["poly"]["terms"].is_array());
}

#[test]
fn pcmatrix_vanishes_at_the_p3_solution() {
    let v = json(&["pcmatrix", "--p", "3", "--curve", "0,0,1,0,2", "--u", "1,0,0"]);
    for k in ["h11", "h12", "h21", "h22"] {
        assert_eq!(v[k], "0", "{k}");
    }
}

#[test]
fn detpsi_certificate() {
    let v = json(&["detpsi", "--p", "5"]);
    assert_eq!(v["leading_term_certificate"], true);
    assert_eq!(v["support_ok"], true);
}

#[test]
fn hurwitz_totals() {
    for (p, n) in [("3", 1), ("5", 5), ("7", 14), ("97", 38024)] {
        let v = json(&["hurwitz", "--p", p]);
        assert_eq!(v["total"], n);
        assert_eq!(v["closed_form"], n);
    }
}

#[test]
fn ftheta_symbolic_and_numeric() {
    let v = json(&["ftheta", "--p", "3"]);
    assert_eq!(v["f_theta_p"]["text"], "x^3 + a3");
    let v = json(&["ftheta", "--p", "3", "--curve", "0,0,2,0,1"]);
    assert_eq!(v["f_theta_p"]["text"], "x^3 + 2");
}

#[test]
fn json_is_byte_identical_across_runs() {
    for args in [
        &["count", "--p", "7", "--curve", "0,0,0,1,3", "--solutions"][..],
        &["verify", "properties", "--seed", "42"][..],
        &["prank-strata", "--p", "5"][..],
    ] {
        assert_eq!(pcurv(args).stdout, pcurv(args).stdout, "{args:?}");
    }
}

#[test]
fn verify_suites_pass() {
    let out = pcurv(&["verify", "golden"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["checks"].as_array().unwrap().len() >= 30);
    let out = pcurv(&["--format", "text", "verify", "all", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("checks passed"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["count", "--p", "5", "--curve", "1,2"][..],
        &["count", "--p", "9", "--curve", "1,2,3,4,5"][..],
        &["count", "--p", "5", "--curve", "0,0,0,0,0"][..],
        &["count", "--p", "11", "--curve", "0,0,0,1,3"][..],
        &["pcmatrix", "--p", "5", "--u", "1,2,3"][..],
        &["hurwitz", "--p", "2"][..],
        &["nonsense"][..],
        &["count", "--p"][..],
    ] {
        assert_eq!(pcurv(args).status.code(), Some(2), "{args:?}");
    }
}
