//! End-to-end runs of the `lapseq` binary: documents, formats and exit codes.

use std::process::{Command, Output};

use serde_json::Value;

fn lapseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lapseq")).args(args).env("NO_COLOR", "1").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn exponential_transform_matches_its_row() {
    let out = lapseq(&["transform", "--fn", "exp", "--a", "2", "--s", "3", "--n", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["agrees_with_closed_form"], true);
    let values = doc["values"].as_array().unwrap();
    assert_eq!(values.len(), 11);
    // 1/(3-2)^{n+1} = 1
    for v in values {
        assert!((v.as_f64().unwrap() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["transform", "--fn", "sin", "--a", "2", "--s", "1.5", "--n", "6"];
    let (a, b) = (lapseq(&args), lapseq(&args));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    // floats carry 17 significant digits
    assert!(text.contains("\"s\": 1.5000000000000000e0"), "{text}");
}

#[test]
fn binet_solution() {
    let out = lapseq(&["solve-diffeq", "--coeffs", "1,-1,-1", "--init", "0,1", "--check", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert!(doc["residual"].as_f64().unwrap() <= 1e-10);
    assert_eq!(doc["terms"].as_array().unwrap().len(), 2);
    let values: Vec<f64> = doc["values"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(values[30], 832040.0);
    assert!(doc["formula"].as_str().unwrap().contains("√5"));
}

#[test]
fn identity_sweep_passes() {
    let out = lapseq(&["verify-identities", "--which", "1", "--max-m", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["all_passed"], true);
    assert_eq!(doc["counterexamples"].as_array().unwrap().len(), 0);
}

#[test]
fn mapped_examples_pass() {
    for case in ["4", "5", "6"] {
        let out = lapseq(&["verify-mapped", "--case", case]);
        assert_eq!(out.status.code(), Some(0), "case {case}");
        assert_eq!(json(&out)["passed"], true);
    }
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["no-such-command"][..],
        &["verify-mapped", "--case", "7"],
        &["transform", "--fn", "exp", "--s", "3", "--tol", "0"],
        &["verify-identities", "--which", "nope"],
        &["transform", "--fn", "custom-table-row", "--s", "3"],
        &["solve-diffeq", "--coeffs", "1,x"],
    ] {
        let out = lapseq(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn computation_errors_exit_with_one() {
    let out = lapseq(&["transform", "--fn", "exp", "--a", "2", "--s", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("abscissa"));
    let out = lapseq(&["solve-diffeq", "--coeffs", "1,-1,-1", "--init", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn quick_suite_passes_and_fault_is_caught() {
    let ok = lapseq(&["suite", "--profile", "quick"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let doc = json(&ok);
    assert_eq!(doc["criteria"].as_array().unwrap().len(), 11);

    let bad = lapseq(&["suite", "--profile", "quick", "--inject-fault", "table-coefficient", "--format", "text"]);
    assert_eq!(bad.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&bad.stderr);
    assert!(stderr.contains("criterion 1") && stderr.contains("exp row"), "{stderr}");
    let stdout = String::from_utf8_lossy(&bad.stdout);
    assert!(stdout.contains("FAIL") && !stdout.contains('\x1b'));
}

#[test]
fn csv_and_text_formats() {
    let out = lapseq(&["transform", "--fn", "power", "--a", "0.5", "--s", "2", "--n", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("n,phi_n,error,closed_form\n"));
    assert_eq!(text.lines().count(), 5);

    // s φ_n - φ_{n-1} with s = -1/2
    let out = lapseq(&["nabla", "--values", "1,1/2,1/4", "--s", "-1/2", "--p", "1", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("exact: [\"-5/4\",\"-5/8\"]"));
}

#[test]
fn residue_inverse_of_a_sine_row() {
    let out = lapseq(&["invert-residue", "--fn", "sin", "--a", "2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["n_independent"], true);
    assert_eq!(doc["formula"], "(1/2)i e^(-2i t) - (1/2)i e^(2i t)");
}

#[test]
fn table_lists_nine_rows() {
    let doc = json(&lapseq(&["table"]));
    assert_eq!(doc["rows"].as_array().unwrap().len(), 9);
}

#[test]
fn zeta_routes_agree() {
    let doc = json(&lapseq(&["zeta", "--s", "2", "--a", "1"]));
    assert_eq!(doc["agree"], true);
    let v = doc["euler_maclaurin"]["value"].as_f64().unwrap();
    assert!((v - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
}
