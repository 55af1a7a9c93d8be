//! Browser bindings for a small demo page: forward images of table
//! functions, closed forms of constant-coefficient recurrences, and
//! identity sweeps. Every entry point returns a JSON string.
//!
//! The `*_json` functions hold the logic and are plain Rust so they can be
//! tested natively; the `#[wasm_bindgen]` wrappers only convert errors.

use lapseq::diffeq::{self, DifferenceEquation, Rhs};
use lapseq::identities::{self, Identity};
use lapseq::transform::{self, ClosedImage};
use num_rational::BigRational;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest sequence prefix the page may request.
const MAX_TERMS: usize = 60;

/// Quadrature images `φ_0..φ_n` of a table function next to its closed form.
pub fn transform_json(function: &str, a: f64, s: f64, n: usize) -> Result<String, String> {
    let n = n.min(MAX_TERMS);
    let image = match function {
        "exp" => ClosedImage::exp(a),
        "power" => ClosedImage::power(a),
        "sin" => ClosedImage::sin(a),
        "cos" => ClosedImage::cos(a),
        "log" => Ok(ClosedImage::log()),
        other => return Err(format!("unknown function '{other}'")),
    }
    .map_err(|e| e.to_string())?;
    image.check_abscissa(s).map_err(|e| e.to_string())?;
    let seq = transform::forward_transform(&image.source_function(), s, n, 1e-10).map_err(|e| e.to_string())?;
    let closed: Vec<f64> = (0..=n).map(|k| image.eval(k, s)).collect();
    let max_gap = seq.values.iter().zip(&closed).map(|(q, c)| (q - c).abs()).fold(0.0, f64::max);
    Ok(json!({ "s": s, "quadrature": seq.values, "closed_form": closed, "max_gap": max_gap }).to_string())
}

fn rationals(list: &str) -> Result<Vec<BigRational>, String> {
    list.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<BigRational>().map_err(|_| format!("'{t}' is not an integer or fraction")))
        .collect()
}

/// Closed form of `Σ a_k f_{n-k} = 0` with the given initial terms.
pub fn solve_json(coeffs: &str, initial: &str, n: usize) -> Result<String, String> {
    let n = n.min(MAX_TERMS);
    let eq = DifferenceEquation::new(rationals(coeffs)?, Rhs::Zero, rationals(initial)?).map_err(|e| e.to_string())?;
    let solution = diffeq::solve(&eq, n.max(eq.order())).map_err(|e| e.to_string())?;
    let terms: Vec<serde_json::Value> = solution.terms.iter().map(|t| serde_json::to_value(t).unwrap_or_default()).collect();
    Ok(json!({
        "terms": terms,
        "residual": solution.residual,
        "exact": solution.exact,
        "values": solution.values_f64(n),
    })
    .to_string())
}

/// Exact sweep of one identity family up to `max`.
pub fn identity_json(which: &str, max: usize) -> Result<String, String> {
    let identity = Identity::parse(which).ok_or_else(|| format!("unknown identity '{which}'"))?;
    let max = max.clamp(1, identity.default_range());
    serde_json::to_string(&identities::sweep(identity, max)).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn transform(function: &str, a: f64, s: f64, n: usize) -> Result<String, JsValue> {
    transform_json(function, a, s, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn solve(coeffs: &str, initial: &str, n: usize) -> Result<String, JsValue> {
    solve_json(coeffs, initial, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn identity(which: &str, max: usize) -> Result<String, JsValue> {
    identity_json(which, max).map_err(|e| JsValue::from_str(&e))
}
