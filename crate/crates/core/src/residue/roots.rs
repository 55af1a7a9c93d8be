//! Roots of square-free rational polynomials.
//!
//! Approximations come from Aberth–Ehrlich iteration in `f64`. Each one is
//! first tried as an exact Gaussian-rational root by continued-fraction
//! reconstruction; roots that are not exact are refined by Newton's method
//! in Gaussian-rational arithmetic rounded to `2^-PRECISION_BITS` and
//! certified by a residual bound. A Sturm count certifies how many roots are
//! real, so conjugate pairs are never confused with close real roots.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{gauss_abs_le, gauss_real, max_abs, rat_from_f64, rat_to_f64, round_gauss, GaussRational};
use crate::poly::Poly;

const PRECISION_BITS: u32 = 240;

/// A root in the closed upper half plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub value: GaussRational,
    /// Whether `value` is the exact root rather than a certified approximation.
    pub exact: bool,
}

impl Root {
    pub fn is_real(&self) -> bool {
        self.value.im.is_zero()
    }
}

/// Roots with nonnegative imaginary part of a square-free polynomial with
/// rational coefficients; the rest are their conjugates.
pub fn upper_half_roots(q: &Poly<BigRational>) -> Result<Vec<Root>> {
    let degree = q.degree().unwrap_or(0);
    if degree == 0 {
        return Ok(Vec::new());
    }
    let q = q.monic();
    if degree == 1 {
        return Ok(vec![Root { value: gauss_real(-q.coeff(0)), exact: true }]);
    }
    let real_count = sturm_real_root_count(&q);
    let approx = aberth(&q)?;

    let mut roots: Vec<Root> = Vec::new();
    // most-real first, so the `real_count` real roots are claimed before pairs
    let mut order: Vec<Complex<f64>> = approx;
    order.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
    let (reals, complexes) = order.split_at(real_count.min(order.len()));
    for z in reals {
        roots.push(certify(&q, Complex::new(z.re, 0.0), true)?);
    }
    // keep one of each conjugate pair
    for z in complexes.iter().filter(|z| z.im > 0.0) {
        roots.push(certify(&q, *z, false)?);
    }
    if roots.len() != real_count + (degree - real_count) / 2 || !(degree - real_count).is_multiple_of(2) {
        return Err(Error::RootIsolationFailure(format!(
            "found {} roots in the upper half plane for degree {degree} with {real_count} real roots",
            roots.len()
        )));
    }
    // distinct roots must not have collapsed onto one another
    for i in 0..roots.len() {
        for j in 0..i {
            if roots[i].value == roots[j].value {
                return Err(Error::RootIsolationFailure("two approximations converged to the same root".into()));
            }
        }
    }
    Ok(roots)
}

fn certify(q: &Poly<BigRational>, z: Complex<f64>, real: bool) -> Result<Root> {
    if let Some(exact) = reconstruct_exact(q, z, real) {
        return Ok(Root { value: exact, exact: true });
    }
    refine(q, z, real).map(|value| Root { value, exact: false })
}

/// Tries small-denominator rationals near `z` as exact roots.
fn reconstruct_exact(q: &Poly<BigRational>, z: Complex<f64>, real: bool) -> Option<GaussRational> {
    let tol = 1e-7 * (1.0 + z.norm());
    let re = simplest_rational(z.re, tol)?;
    let im = if real { BigRational::zero() } else { simplest_rational(z.im, tol)? };
    let candidate = Complex::new(re, im);
    let qc = q.map(|c| gauss_real(c.clone()));
    qc.eval(&candidate).is_zero().then_some(candidate)
}

/// Simplest fraction within `tol` of `x` with denominator at most 10^6, via
/// continued fractions.
fn simplest_rational(x: f64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() || x.abs() > 1e15 {
        return None;
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(1_000_000) {
            return None;
        }
        let approx = h2.to_f64()? / k2.to_f64()?;
        if (approx - x).abs() <= tol {
            return Some(BigRational::new(h2, k2));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-300 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

/// Newton refinement in rounded Gaussian-rational arithmetic, with the
/// residual check `|q(p)| ≤ 1e-25 ‖q‖`.
fn refine(q: &Poly<BigRational>, z: Complex<f64>, real: bool) -> Result<GaussRational> {
    let qc = q.map(|c| gauss_real(c.clone()));
    let dq = qc.derivative();
    let mut x = Complex::new(
        rat_from_f64(z.re).ok_or_else(|| Error::RootIsolationFailure("non-finite root estimate".into()))?,
        if real { BigRational::zero() } else { rat_from_f64(z.im).unwrap_or_else(BigRational::zero) },
    );
    let bound = max_abs(q.coeffs()) / BigRational::from_integer(BigInt::from(10).pow(25));
    let step_floor = BigRational::new(BigInt::one(), BigInt::one() << (PRECISION_BITS - 20));
    for _ in 0..60 {
        let d = dq.eval(&x);
        if d.is_zero() {
            break;
        }
        let step = qc.eval(&x) / d;
        x = round_gauss(&(&x - &step), PRECISION_BITS);
        if real {
            x.im = BigRational::zero();
        }
        let scale = BigRational::one() + x.re.abs() + x.im.abs();
        if gauss_abs_le(&step, &(&step_floor * &scale)) {
            break;
        }
    }
    if gauss_abs_le(&qc.eval(&x), &bound) {
        Ok(x)
    } else {
        Err(Error::RootIsolationFailure(format!("residual check failed near {z}")))
    }
}

/// Simultaneous approximation of all roots in double precision.
fn aberth(q: &Poly<BigRational>) -> Result<Vec<Complex<f64>>> {
    let coeffs: Vec<Complex<f64>> = q.coeffs().iter().map(|c| Complex::new(rat_to_f64(c), 0.0)).collect();
    if coeffs.iter().any(|c| !c.re.is_finite()) {
        return Err(Error::RootIsolationFailure("coefficients exceed double range".into()));
    }
    let n = coeffs.len() - 1;
    let eval = |z: Complex<f64>| {
        let mut p = Complex::new(0.0, 0.0);
        let mut dp = Complex::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };
    // Cauchy bound on the root moduli
    let lead = coeffs[n].re;
    let radius = 1.0 + coeffs[..n].iter().map(|c| (c.re / lead).abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex<f64>> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex::from_polar(0.5 * radius, angle)
        })
        .collect();
    for _ in 0..1000 {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let (p, dp) = eval(z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex<f64> = (0..n).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let step = ratio / (Complex::new(1.0, 0.0) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    // polish each root with plain Newton steps
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval(*zk);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if step.re.is_finite() && step.im.is_finite() {
                *zk -= step;
            }
        }
    }
    Ok(z)
}

/// Number of distinct real roots, from the sign changes of the Sturm
/// sequence at `±∞`.
pub fn sturm_real_root_count(q: &Poly<BigRational>) -> usize {
    let mut seq = vec![q.clone(), q.derivative()];
    while !seq.last().expect("nonempty").is_zero() {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        seq.push(-&r);
    }
    seq.pop();
    let changes = |signs: Vec<i32>| {
        let nz: Vec<i32> = signs.into_iter().filter(|s| *s != 0).collect();
        nz.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let sign = |c: &BigRational| if c.is_positive() { 1 } else if c.is_negative() { -1 } else { 0 };
    let at_pos: Vec<i32> = seq.iter().map(|p| sign(&p.lead())).collect();
    let at_neg: Vec<i32> = seq
        .iter()
        .map(|p| {
            let s = sign(&p.lead());
            if p.degree().unwrap_or(0) % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect();
    changes(at_neg).saturating_sub(changes(at_pos))
}
