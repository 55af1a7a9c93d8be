//! The generalized backward difference `∇_s φ_n = s φ_n - φ_{n-1}`.
//!
//! `∇_s` is the image of differentiation: `∇_s^p φ_n` is the image of
//! `f^{(p)}` once initial data corrects the low indices. Everything here is
//! generic over the coefficient field, so rational inputs are handled
//! exactly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Field;
use crate::special::binom_real;

fn binom_t<T: Field>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    // exact in any field: multiply and divide in lockstep over integers
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    T::from_i64(acc as i64)
}

fn pow_t<T: Field>(s: &T, k: usize) -> T {
    (0..k).fold(T::one(), |acc, _| acc * s.clone())
}

fn get<T: Field>(phi: &[T], index: i64) -> Result<T> {
    if index < 0 {
        return Ok(T::zero());
    }
    phi.get(index as usize)
        .cloned()
        .ok_or(Error::InsufficientLength { needed: index as usize + 1, got: phi.len() })
}

/// `∇_s^p φ_n = Σ_{k=0}^{p} (-1)^k C(p,k) s^{p-k} φ_{n-k}`; needs `n ≥ p`.
pub fn nabla_power<T: Field>(phi: &[T], p: usize, s: &T, n: usize) -> Result<T> {
    if n < p {
        return Err(Error::IndexUnderflow { n, p });
    }
    nabla_power_padded(phi, p, s, n)
}

/// The same sum with `φ_k = 0` for negative `k`.
fn nabla_power_padded<T: Field>(phi: &[T], p: usize, s: &T, n: usize) -> Result<T> {
    let mut acc = T::zero();
    for k in 0..=p {
        let term = binom_t::<T>(p, k) * pow_t(s, p - k) * get(phi, n as i64 - k as i64)?;
        acc = if k % 2 == 0 { acc + term } else { acc - term };
    }
    Ok(acc)
}

/// `∇_s` applied `p` times to the whole prefix, straight from the
/// definition. Entries with index below `p` read missing terms as zero.
pub fn nabla_iterated<T: Field>(phi: &[T], p: usize, s: &T) -> Vec<T> {
    let mut cur = phi.to_vec();
    for _ in 0..p {
        let prev = cur.clone();
        for n in 0..cur.len() {
            let back = if n > 0 { prev[n - 1].clone() } else { T::zero() };
            cur[n] = s.clone() * prev[n].clone() - back;
        }
    }
    cur
}

/// `φ_{n-p} = Σ_{j=0}^{p} (-1)^j C(p,j) s^{p-j} ∇_s^j φ_n`, from
/// `E^{-1} = sI - ∇_s`.
pub fn unshift_via_nabla<T: Field>(phi: &[T], p: usize, s: &T, n: usize) -> Result<T> {
    if n < p {
        return Err(Error::IndexUnderflow { n, p });
    }
    let mut acc = T::zero();
    for j in 0..=p {
        let term = binom_t::<T>(p, j) * pow_t(s, p - j) * nabla_power(phi, j, s, n)?;
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    Ok(acc)
}

/// Image of `f^{(p)}` at index `n`. For `n ≥ p` this is `∇_s^p φ_n`; below
/// that it is corrected by the initial values `init[j] = f^{(j)}(0)`:
/// `∇_s^p φ_n - (-1)^n Σ_{j=1}^{p-n} C(p-j, n) s^{p-j-n} f^{(j-1)}(0)`.
pub fn derivative_image<T: Field>(phi: &[T], p: usize, s: &T, n: usize, init: &[T]) -> Result<T> {
    if n >= p {
        return nabla_power(phi, p, s, n);
    }
    let needed = p - n;
    if init.len() < needed {
        return Err(Error::MissingInitialData { needed, got: init.len() });
    }
    let mut correction = T::zero();
    for j in 1..=needed {
        correction = correction + binom_t::<T>(p - j, n) * pow_t(s, p - j - n) * init[j - 1].clone();
    }
    let base = nabla_power_padded(phi, p, s, n)?;
    Ok(if n.is_multiple_of(2) { base - correction } else { base + correction })
}

/// Image of `t^r f^{(p)}(t)` at index `n`: `(n+1)_r` times the derivative
/// image at index `n + r`. With `p = 0` it is `(n+1)_r φ_{n+r}`.
pub fn monomial_multiply_image<T: Field>(phi: &[T], r: usize, p: usize, s: &T, n: usize, init: &[T]) -> Result<T> {
    let rising = (1..=r).fold(T::one(), |acc, i| acc * T::from_i64((n + i) as i64));
    Ok(rising * derivative_image(phi, p, s, n + r, init)?)
}

/// Order `α` of a Riemann–Liouville derivative with `m ≤ α < m+1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FractionalOrder {
    pub alpha: f64,
    pub m: usize,
}

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::OrderOutOfRange(alpha));
        }
        Ok(FractionalOrder { alpha, m: alpha.floor() as usize })
    }
}

/// Image of `D^α f` for `0 ≤ α < 1`:
/// `Σ_{k=0}^{n} (-1)^k C(α,k) s^{α-k} φ_{n-k}`. Assumes the fractional
/// integral of order `1-α` of `f` vanishes at `0+`, as it does for `f`
/// bounded near the origin.
pub fn fractional_image(phi: &[f64], order: FractionalOrder, s: f64, n: usize) -> Result<f64> {
    if order.m != 0 {
        return Err(Error::OrderOutOfRange(order.alpha));
    }
    if phi.len() <= n {
        return Err(Error::InsufficientLength { needed: n + 1, got: phi.len() });
    }
    let alpha = order.alpha;
    let mut acc = 0.0;
    for k in 0..=n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom_real(alpha, k) * s.powf(alpha - k as f64) * phi[n - k];
    }
    Ok(acc)
}
