//! The forward transform `φ_n(s) = ∫₀^∞ e^{-st} tⁿ/n! f(t) dt`, its image
//! sequences, closed-form rules and the sequence-level operator rules.

mod closed;
mod ops;
mod source;

pub use closed::{ClosedImage, ImageRule};
pub use ops::{
    convolve_images, image_from_laplace, image_of_delay, image_of_delay_as_printed, image_of_shift,
    integrate_image,
};
pub use source::SourceFunction;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_half_line, HalfLine, QuadOptions, QuadResult};
use crate::special::ln_gamma;

/// Prefix `φ_0(s), ..., φ_N(s)` of an image sequence at a fixed abscissa,
/// with a per-entry absolute error estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct ImageSeq {
    pub s: f64,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    /// Upper bound on every entry of `errors`; always positive.
    pub tol: f64,
}

impl ImageSeq {
    /// Builds a sequence whose tolerance is the largest entry error.
    pub fn new(s: f64, values: Vec<f64>, errors: Vec<f64>) -> Self {
        assert_eq!(values.len(), errors.len(), "one error estimate per entry");
        let tol = errors.iter().copied().fold(f64::MIN_POSITIVE, f64::max);
        ImageSeq { s, values, errors, tol }
    }

    /// Values known to rounding accuracy.
    pub fn exact(s: f64, values: Vec<f64>) -> Self {
        let errors = values.iter().map(|v| 4.0 * f64::EPSILON * v.abs()).collect();
        ImageSeq::new(s, values, errors)
    }

    /// Samples a closed-form rule at indices `0..=n_max`.
    pub fn from_closed(image: &ClosedImage, s: f64, n_max: usize) -> Result<Self> {
        image.check_abscissa(s)?;
        let values = (0..=n_max).map(|n| image.eval(n, s)).collect();
        Ok(ImageSeq::exact(s, values))
    }

    pub fn n_max(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `φ_n`, with negative indices reading as zero.
    pub fn get(&self, n: i64) -> f64 {
        if n < 0 {
            0.0
        } else {
            self.values.get(n as usize).copied().unwrap_or(0.0)
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,phi_n\n");
        for (n, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{n},{v:.16e}\n"));
        }
        out
    }
}

impl Serialize for ImageSeq {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ImageSeq", 3)?;
        st.serialize_field("s", &self.s)?;
        st.serialize_field("tol", &self.tol)?;
        st.serialize_field("values", &self.values)?;
        st.end()
    }
}

fn quad_options(tol: f64) -> QuadOptions {
    // aim for near machine accuracy, accept anything within `tol`
    QuadOptions { abs_tol: 1e-300, rel_tol: 1e-13, max_abs_error: tol, max_panels: 800 }
}

/// Generalized-order transform `(1/Γ(α)) ∫₀^∞ t^{α-1} e^{-st} f(t) dt`;
/// `α = n+1` gives `φ_n(s)`.
pub fn transform_order(f: &SourceFunction, s: f64, alpha: f64, opts: &QuadOptions) -> Result<QuadResult> {
    if !(s > f.exp_order) {
        return Err(Error::AbscissaTooSmall { s, abscissa: f.exp_order });
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidParams(format!("transform order {alpha} must be positive")));
    }
    let k = alpha - 1.0 + f.origin_exponent;
    if !(k > -1.0) {
        return Err(Error::InvalidParams(format!("origin exponent {} makes the integral divergent", f.origin_exponent)));
    }
    let decay = s - f.exp_order;
    let shape = HalfLine {
        origin_exponent: k,
        scale: k.max(1.0) / decay,
        decay,
        breakpoints: f.breakpoints.clone(),
    };
    let log_norm = ln_gamma(alpha);
    let integrand = |t: f64| {
        // t^{α-1}/Γ(α) e^{-st} in log space
        let w = ((alpha - 1.0) * t.ln() - log_norm - s * t).exp();
        if w == 0.0 {
            0.0
        } else {
            w * f.eval(t)
        }
    };
    Ok(integrate_half_line(integrand, &shape, opts))
}

/// Forward transform `φ_0(s)..φ_N(s)` with every entry's estimated absolute
/// error at most `tol`.
pub fn forward_transform(f: &SourceFunction, s: f64, n_max: usize, tol: f64) -> Result<ImageSeq> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParams(format!("tolerance {tol} must be positive")));
    }
    forward_transform_with(f, s, n_max, &quad_options(tol))
}

/// Forward transform with explicit quadrature options. An entry fails when
/// its error estimate exceeds `opts.max_abs_error` (when finite) or the
/// abs/rel target otherwise.
pub fn forward_transform_with(f: &SourceFunction, s: f64, n_max: usize, opts: &QuadOptions) -> Result<ImageSeq> {
    if !(s > f.exp_order) {
        return Err(Error::AbscissaTooSmall { s, abscissa: f.exp_order });
    }
    let entry = |n: usize| -> Result<(f64, f64)> {
        let r = transform_order(f, s, n as f64 + 1.0, opts)?;
        let limit = if opts.max_abs_error.is_finite() { opts.max_abs_error } else { opts.target(r.value) };
        if r.abs_error > limit || !r.value.is_finite() {
            return Err(Error::QuadratureFailure { requested: limit, achieved: r.abs_error });
        }
        Ok((r.value, r.abs_error.max(f64::EPSILON * r.value.abs())))
    };
    #[cfg(feature = "parallel")]
    let entries: Vec<Result<(f64, f64)>> = {
        use rayon::prelude::*;
        (0..=n_max).into_par_iter().map(entry).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let entries: Vec<Result<(f64, f64)>> = (0..=n_max).map(entry).collect();
    let (values, errors) = entries.into_iter().collect::<Result<Vec<_>>>()?.into_iter().unzip();
    Ok(ImageSeq::new(s, values, errors))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_example() {
        let f = SourceFunction::exp(2.0);
        let phi = forward_transform(&f, 3.0, 0, 1e-10).unwrap();
        assert!((phi.values[0] - 1.0).abs() < 1e-12);
        assert!(phi.errors[0] <= phi.tol);
    }

    #[test]
    fn constant_and_sine_examples() {
        let one = forward_transform(&SourceFunction::constant(1.0), 2.0, 1, 1e-10).unwrap();
        assert!((one.values[1] - 0.25).abs() < 1e-13);
        let sin = forward_transform(&SourceFunction::sin(1.0), 1.0, 0, 1e-10).unwrap();
        assert!((sin.values[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn divergent_abscissa_is_rejected() {
        let f = SourceFunction::exp(2.0);
        assert!(matches!(forward_transform(&f, 2.0, 3, 1e-8), Err(Error::AbscissaTooSmall { .. })));
    }

    #[test]
    fn large_index_does_not_overflow() {
        // φ_n(s) of the constant 1 is s^{-(n+1)}
        let one = forward_transform(&SourceFunction::constant(1.0), 1.0, 170, 1e-8).unwrap();
        assert!((one.values[170] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn impossible_tolerance_reports_failure() {
        let f = SourceFunction::new("jumpy", |t: f64| (1.0 / t).sin());
        let opts = QuadOptions { abs_tol: 1e-300, rel_tol: 0.0, max_abs_error: 1e-300, max_panels: 20 };
        match forward_transform_with(&f, 1.0, 0, &opts) {
            Err(Error::QuadratureFailure { achieved, .. }) => assert!(achieved > 1e-300),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn json_and_csv_shapes() {
        let seq = ImageSeq::exact(2.0, vec![0.5, 0.25]);
        let json = serde_json::to_string(&seq).unwrap();
        assert!(json.starts_with("{\"s\":2.0,\"tol\":"));
        assert!(json.ends_with("\"values\":[0.5,0.25]}"));
        assert_eq!(seq.to_csv().lines().next(), Some("n,phi_n"));
        assert_eq!(seq.to_csv().lines().count(), 3);
    }
}
