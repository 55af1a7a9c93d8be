//! Value parsers for command-line numbers.

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational from `7`, `-3/4`, `0.125` or `2.5e-3`.
pub fn rational(text: &str) -> Result<BigRational, String> {
    let t = text.trim();
    let bad = || format!("`{text}` is not a rational number (try 3, -1/2 or 0.25)");
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(format!("`{text}` has a zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (negative, unsigned) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = unsigned.split_once('.').unwrap_or((unsigned, ""));
    let all_digits = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) || (int_part.is_empty() && frac_part.is_empty()) {
        return Err(bad());
    }
    let mut numer: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let factor = BigRational::from_integer(BigInt::from(10).pow(scale.unsigned_abs()));
    let value = BigRational::from_integer(numer);
    Ok(if scale >= 0 { value * factor } else { value / factor })
}

/// A strictly positive, finite float.
pub fn positive(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(x) => Err(format!("{x} must be positive and finite")),
        Err(_) => Err(format!("`{text}` is not a number")),
    }
}
