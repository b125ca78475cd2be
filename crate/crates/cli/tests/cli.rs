use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_logkernel"));
    cmd.args(args).env_remove("LOGKERNEL_MAX_PRECISION");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

fn assert_schema(row: &Value) {
    for key in ["d", "ell", "precision_used", "exponents", "stabilized", "certificate", "source_field"] {
        assert!(row.get(key).is_some(), "missing {key} in {row}");
    }
    assert!(row["exponents"].is_array());
    assert!(row["stabilized"].is_boolean());
}

#[test]
fn wk_minus_three_is_trivial_for_every_twist() {
    for i in -3..=3 {
        let i = i.to_string();
        let o = run(&["--json", "wk", "--d", "-3", "--i", &i, "--r", "1"]);
        assert_eq!(code(&o), 0);
        let v = json(&o);
        assert_schema(&v);
        assert_eq!(v["exponents"], Value::Array(vec![]), "i = {i}");
    }
}

#[test]
fn wk_minus_23_is_trivial() {
    let o = run(&["--json", "wk", "--d", "-23", "--i", "0", "--r", "1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["exponents"], Value::Array(vec![]));
    assert_eq!(v["source_field"], "Q(sqrt(-23))");
    assert_eq!(v["k_star"]["source_field"], "Q(sqrt(69))");
}

#[test]
fn invalid_inputs_exit_three() {
    assert_eq!(code(&run(&["wk", "--d", "10", "--i", "5", "--r", "2"])), 3);
    assert_eq!(code(&run(&["--ell", "4", "field", "--d", "5"])), 3);
    assert_eq!(code(&run(&["field", "--d", "12"])), 3);
    assert_eq!(code(&run(&["frobnicate"])), 3);
    assert_eq!(code(&run(&["--json", "--csv", "field", "--d", "5"])), 3);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn precision_cap_from_environment_gives_exit_two() {
    let args = ["--precision", "4", "--json", "field", "--d", "-199"];
    let o = run_env(&args, &[("LOGKERNEL_MAX_PRECISION", "4")]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["stabilized"], false);
    let o = run(&args);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["exponents"], serde_json::json!([2]));
}

#[test]
fn gross_scan_certifies_every_row() {
    let o = run(&["--json", "scan", "--dmin", "-50", "--dmax", "-2", "--report", "gross"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let rows = v["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    for row in rows {
        assert_schema(row);
        assert_eq!(row["certificate"], true, "{row}");
    }
    let ds: Vec<i64> = rows.iter().map(|r| r["d"].as_i64().unwrap()).collect();
    assert!(ds.windows(2).all(|w| w[0] < w[1]), "rows are ordered by d");
    assert_eq!(v["summary"]["all_rows_hold"], true);
}

#[test]
fn reflection_scan_reports_both_orientations() {
    let o = run(&["--json", "scan", "--dmin", "2", "--dmax", "50", "--report", "reflection"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let rows = v["rows"].as_array().unwrap();
    let outside: Vec<i64> =
        rows.iter().filter(|r| r["within_bounds"] == false).map(|r| r["d"].as_i64().unwrap()).collect();
    // Q(√−87), Q(√−14) and Q(√−129) carry a 3-rank their real mirrors lack.
    assert_eq!(outside, vec![29, 42, 43]);
    assert!(rows.iter().all(|r| r["delta"].as_i64().unwrap() <= 0));
    assert_eq!(v["summary"]["all_rows_hold"], false);
    assert_eq!(v["summary"]["mirror_bound_held"], true);
    assert_eq!(v["summary"]["skipped_non_squarefree"], 19);
}

#[test]
fn empty_range_prints_nothing() {
    let o = run(&["scan", "--dmin", "10", "--dmax", "2", "--report", "reflection"]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "--seed",
        "7",
        "--json",
        "scan",
        "--dmin",
        "-300",
        "--dmax",
        "300",
        "--report",
        "triviality",
        "--sample",
        "20",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["rows"].as_array().unwrap().len(), 20);
    let c = run(&[
        "--seed",
        "8",
        "--json",
        "scan",
        "--dmin",
        "-300",
        "--dmax",
        "300",
        "--report",
        "triviality",
        "--sample",
        "20",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn csv_scan_has_schema_header() {
    let o = run(&["--csv", "scan", "--dmin", "2", "--dmax", "12", "--report", "gross"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("d,ell,precision_used,exponents,stabilized,certificate,source_field"));
    assert_eq!(text.lines().count(), 8);
    assert!(String::from_utf8(o.stderr).unwrap().starts_with("# report=gross"));
}

#[test]
fn cubic_examples() {
    let o = run(&["--json", "cubic", "--conductor", "7", "--i", "1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["triviality"]["trivial"], true);
    assert_eq!(v["polynomial"], serde_json::json!([1, -2, -1]));
    let v = json(&run(&["--json", "cubic", "--conductor", "19", "--i", "1"]));
    assert_eq!(v["triviality"]["trivial"], false);
    let v = json(&run(&["--json", "cubic", "--conductor", "63", "--index", "1", "--i", "0"]));
    assert_eq!(v["log_ramified"], serde_json::json!([7]));
    assert_eq!(code(&run(&["cubic", "--conductor", "8"])), 3);
}

#[test]
fn lambda_levels_and_twists() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, r#"{{"ell":3,"precision":12,"generators":1,"matrix":[[[-3,1]]]}}"#).unwrap();
    let path = file.path().to_str().unwrap();
    let o = run(&["--json", "lambda", "--file", path, "--levels", "3"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!((v["mu"].as_u64(), v["lambda"].as_u64(), v["nu"].as_i64()), (Some(0), Some(1), Some(1)));
    for level in v["levels"].as_array().unwrap() {
        assert_eq!(level["log_size"], level["predicted_log_size"]);
    }
    let infinite: Vec<i64> = v["twists"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|t| t["finite"] == false)
        .map(|t| t["i"].as_i64().unwrap())
        .collect();
    assert_eq!(infinite, vec![-1]);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, r#"{{"ell":4,"precision":12,"generators":1,"matrix":[[[1]]]}}"#).unwrap();
    assert_eq!(code(&run(&["lambda", "--file", bad.path().to_str().unwrap()])), 3);
    assert_eq!(code(&run(&["lambda", "--file", "/nonexistent/x.json"])), 3);
}
