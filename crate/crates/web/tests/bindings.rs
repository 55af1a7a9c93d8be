use lapseq_web::{identity_json, solve_json, transform_json};
use serde_json::Value;

fn parse(text: String) -> Value {
    serde_json::from_str(&text).unwrap()
}

#[test]
fn transform_agrees_with_closed_form() {
    let v = parse(transform_json("sin", 2.0, 1.5, 8).unwrap());
    assert_eq!(v["quadrature"].as_array().unwrap().len(), 9);
    assert!(v["max_gap"].as_f64().unwrap() < 1e-9);
}

#[test]
fn transform_rejects_bad_input() {
    assert!(transform_json("tan", 1.0, 2.0, 3).is_err());
    assert!(transform_json("exp", 2.0, 1.0, 3).unwrap_err().contains("abscissa"));
}

#[test]
fn fibonacci_closed_form() {
    let v = parse(solve_json("1,-1,-1", "0,1", 20).unwrap());
    assert_eq!(v["values"][20].as_f64().unwrap(), 6765.0);
    assert!(v["residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);
    assert!(solve_json("1,x", "0", 5).is_err());
}

#[test]
fn identity_sweep() {
    let v = parse(identity_json("1", 50).unwrap());
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["checked"], 50);
    assert!(identity_json("nope", 5).is_err());
}
