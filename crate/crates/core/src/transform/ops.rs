//! Sequence-level operator rules: shift, delay, running integral,
//! convolution and the bridge from Laplace-transform derivatives.
//!
//! Error estimates are propagated with the triangle inequality plus a
//! rounding allowance for the arithmetic done here.

use crate::error::{Error, Result};

use super::ImageSeq;

const ROUNDING: f64 = 8.0 * f64::EPSILON;

/// Image of `e^{at} f(t)` at abscissa `s`, from a sampler of `f`'s image:
/// `result(n, s) = φ_n(s - a)`.
pub fn image_of_shift<F>(sampler: F, s: f64, a: f64) -> Result<ImageSeq>
where
    F: Fn(f64) -> Result<ImageSeq>,
{
    let base = sampler(s - a)?;
    Ok(ImageSeq { s, ..base })
}

/// Image of `f(t-a)` (zero for `t < a`):
/// `result_n = e^{-as} Σ_{k=0}^{n} a^{n-k}/(n-k)! φ_k(s)`.
pub fn image_of_delay(phi: &ImageSeq, a: f64) -> Result<ImageSeq> {
    delay_with(phi, a, |_, k| k)
}

/// The delay sum with the subscript written as `φ_{n-k}` under the weight
/// `a^{n-k}/(n-k)!`. It differs from [`image_of_delay`] unless `a = 1` or the
/// image is constant in `n`; kept for comparison reports.
pub fn image_of_delay_as_printed(phi: &ImageSeq, a: f64) -> Result<ImageSeq> {
    delay_with(phi, a, |n, k| n - k)
}

fn delay_with(phi: &ImageSeq, a: f64, index: impl Fn(usize, usize) -> usize) -> Result<ImageSeq> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::NonPositiveDelay(a));
    }
    let damp = (-a * phi.s).exp();
    let mut values = Vec::with_capacity(phi.len());
    let mut errors = Vec::with_capacity(phi.len());
    for n in 0..phi.len() {
        let (mut v, mut e) = (0.0, 0.0);
        for k in 0..=n {
            // weight a^{n-k}/(n-k)! in log space
            let j = (n - k) as f64;
            let w = (j * a.ln() - crate::special::ln_gamma(j + 1.0)).exp();
            let i = index(n, k);
            v += w * phi.values[i];
            e += w * (phi.errors[i] + ROUNDING * phi.values[i].abs());
        }
        values.push(damp * v);
        errors.push(damp * e);
    }
    Ok(ImageSeq::new(phi.s, values, errors))
}

/// Image of the running integral `g(t) = ∫₀^t f`:
/// `result_n = Σ_{k=0}^{n} φ_k / s^{n-k+1}`.
pub fn integrate_image(phi: &ImageSeq) -> Result<ImageSeq> {
    let s = phi.s;
    if !(s > 0.0) {
        return Err(Error::NonPositiveScale(s));
    }
    // result_n = (result_{n-1} + φ_n) / s
    let mut values = Vec::with_capacity(phi.len());
    let mut errors = Vec::with_capacity(phi.len());
    let (mut v, mut e) = (0.0, 0.0);
    for (phi_n, err_n) in phi.values.iter().zip(&phi.errors) {
        v = (v + phi_n) / s;
        e = (e + err_n + ROUNDING * (v * s).abs()) / s;
        values.push(v);
        errors.push(e);
    }
    Ok(ImageSeq::new(s, values, errors))
}

/// Image of the convolution `(f * g)(t) = ∫₀^t f(t-τ) g(τ) dτ`:
/// `result_n = Σ_{k=0}^{n} φ_{n-k} ψ_k`. The result covers the common prefix.
pub fn convolve_images(phi: &ImageSeq, psi: &ImageSeq) -> Result<ImageSeq> {
    if phi.s != psi.s {
        return Err(Error::AbscissaMismatch { left: phi.s, right: psi.s });
    }
    let len = phi.len().min(psi.len());
    let mut values = Vec::with_capacity(len);
    let mut errors = Vec::with_capacity(len);
    for n in 0..len {
        let (mut v, mut e) = (0.0, 0.0);
        for k in 0..=n {
            let (a, ea) = (phi.values[n - k], phi.errors[n - k]);
            let (b, eb) = (psi.values[k], psi.errors[k]);
            v += a * b;
            e += a.abs() * eb + b.abs() * ea + ea * eb + ROUNDING * (a * b).abs();
        }
        values.push(v);
        errors.push(e);
    }
    Ok(ImageSeq::new(phi.s, values, errors))
}

/// Image from the derivatives of the ordinary Laplace transform `F`:
/// `result_n = (-1)^n F^{(n)}(s) / n!`. `derivs(n)` returns `F^{(n)}(s)`, or
/// `None` when that order is unavailable.
pub fn image_from_laplace<D>(derivs: D, s: f64, n_max: usize) -> Result<ImageSeq>
where
    D: Fn(usize) -> Option<f64>,
{
    let mut values = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let d = derivs(n).filter(|d| d.is_finite()).ok_or(Error::DerivativeUnavailable(n))?;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let log_fact = crate::special::ln_gamma(n as f64 + 1.0);
        values.push(sign * d.signum() * (d.abs().ln() - log_fact).exp());
    }
    Ok(ImageSeq::exact(s, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{forward_transform, ClosedImage, SourceFunction};

    fn closed(img: &ClosedImage, s: f64, n: usize) -> ImageSeq {
        ImageSeq::from_closed(img, s, n).unwrap()
    }

    #[test]
    fn delayed_constant_matches_direct_integral() {
        let one = closed(&ClosedImage::exp(0.0).unwrap(), 1.0, 4);
        for a in [0.5, 1.0, 2.5] {
            let d = image_of_delay(&one, a).unwrap();
            assert!((d.values[0] - (-a).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn delayed_exponential_example() {
        let phi = closed(&ClosedImage::exp(1.0).unwrap(), 2.0, 3);
        let d = image_of_delay(&phi, 1.0).unwrap();
        assert!((d.values[1] - 2.0 * (-2.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn delay_convention_decided_by_quadrature() {
        // e^{-t} delayed by 2, a case where the two index conventions differ
        let (a, s) = (2.0, 1.5);
        let base = ClosedImage::exp(-1.0).unwrap();
        let phi = closed(&base, s, 6);
        let reference = forward_transform(&SourceFunction::exp(-1.0).delay(a), s, 6, 1e-12).unwrap();
        let chosen = image_of_delay(&phi, a).unwrap();
        let printed = image_of_delay_as_printed(&phi, a).unwrap();
        for n in 0..=6 {
            assert!((chosen.values[n] - reference.values[n]).abs() < 1e-11, "n={n}");
        }
        assert!((printed.values[3] - reference.values[3]).abs() > 1e-4);
    }

    #[test]
    fn running_integral_of_constant() {
        let s = 1.3;
        let one = closed(&ClosedImage::exp(0.0).unwrap(), s, 6);
        let g = integrate_image(&one).unwrap();
        assert!((g.values[0] - 1.0 / (s * s)).abs() < 1e-15);
        let t = closed(&ClosedImage::power(1.0).unwrap(), s, 6);
        for n in 0..=6 {
            assert!((g.values[n] - t.values[n]).abs() < 1e-14 * t.values[n]);
            assert!(g.errors[n] <= g.tol);
        }
    }

    #[test]
    fn convolution_of_exponentials() {
        let (a, b, s) = (0.5, -1.0, 2.0);
        let fa = closed(&ClosedImage::exp(a).unwrap(), s, 8);
        let fb = closed(&ClosedImage::exp(b).unwrap(), s, 8);
        let conv = convolve_images(&fa, &fb).unwrap();
        for n in 0..=8 {
            let expected = (fa.values[n] - fb.values[n]) / (a - b);
            assert!((conv.values[n] - expected).abs() < 1e-14);
        }
        let other = closed(&ClosedImage::exp(a).unwrap(), 3.0, 8);
        assert!(matches!(convolve_images(&fa, &other), Err(Error::AbscissaMismatch { .. })));
    }

    #[test]
    fn laplace_derivative_bridge() {
        let (a, s): (f64, f64) = (0.75, 2.0);
        // F = 1/(s-a), F^{(n)} = (-1)^n n!/(s-a)^{n+1}
        let derivs = |n: usize| {
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            Some(if n.is_multiple_of(2) { 1.0 } else { -1.0 } * fact / (s - a).powi(n as i32 + 1))
        };
        let img = image_from_laplace(derivs, s, 10).unwrap();
        for n in 0..=10 {
            assert!((img.values[n] - (s - a).powi(-(n as i32) - 1)).abs() < 1e-14);
        }
        let missing = image_from_laplace(|n| if n < 3 { Some(1.0) } else { None }, s, 5);
        assert_eq!(missing, Err(Error::DerivativeUnavailable(3)));
    }

    #[test]
    fn shift_of_sampled_family() {
        let sampler = |s: f64| ImageSeq::from_closed(&ClosedImage::cos(2.0).unwrap(), s, 5);
        let shifted = image_of_shift(sampler, 3.0, 1.0).unwrap();
        let expected = ClosedImage::cos(2.0).unwrap().shifted(1.0).unwrap();
        assert_eq!(shifted.s, 3.0);
        for n in 0..=5 {
            assert!((shifted.values[n] - expected.eval(n, 3.0)).abs() < 1e-15);
        }
        let too_small = |s: f64| ImageSeq::from_closed(&ClosedImage::exp(1.0).unwrap(), s, 2);
        assert!(matches!(image_of_shift(too_small, 1.5, 1.0), Err(Error::AbscissaTooSmall { .. })));
    }
}
