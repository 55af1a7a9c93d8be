//! Quadratic surds `a + b√d` for exact roots of degree-two factors.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::{round_to_bits, GaussRational};

/// `a + b√d` with `d` a square-free integer other than 1 (negative `d` gives
/// complex values). Rational numbers have `b = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Surd {
    pub a: BigRational,
    pub b: BigRational,
    pub d: BigInt,
}

const APPROX_BITS: u32 = 240;

impl Surd {
    pub fn rational(a: BigRational) -> Self {
        Surd { a, b: BigRational::zero(), d: BigInt::one() }
    }

    /// `a + b√q` for rational `q`, normalized so the radicand is a
    /// square-free integer.
    pub fn new(a: BigRational, b: BigRational, q: &BigRational) -> Self {
        if b.is_zero() || q.is_zero() {
            return Surd::rational(a);
        }
        // √(n/m) = √(n m) / m
        let m = q.denom().clone();
        let nm = q.numer() * &m;
        let (k, d) = split_square(&nm);
        let b = b * BigRational::new(k, m);
        if d == BigInt::one() {
            return Surd::rational(a + b);
        }
        Surd { a, b, d }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact Gaussian-rational value when `d` is 1 or -1.
    pub fn exact_value(&self) -> Option<GaussRational> {
        if self.b.is_zero() {
            Some(Complex::new(self.a.clone(), BigRational::zero()))
        } else if self.d == BigInt::from(-1) {
            Some(Complex::new(self.a.clone(), self.b.clone()))
        } else {
            None
        }
    }

    /// Value with `√|d|` rounded to `2^-240`.
    pub fn approx_value(&self) -> GaussRational {
        if let Some(v) = self.exact_value() {
            return v;
        }
        let root = sqrt_rational(&BigRational::from_integer(self.d.abs()));
        let part = &self.b * root;
        if self.d.sign() == Sign::Minus {
            Complex::new(self.a.clone(), part)
        } else {
            Complex::new(&self.a + part, BigRational::zero())
        }
    }

    pub fn conj_radical(&self) -> Self {
        Surd { a: self.a.clone(), b: -self.b.clone(), d: self.d.clone() }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let radical = if self.d == BigInt::from(-1) {
            "i".to_string()
        } else if self.d.is_negative() {
            format!("i√{}", -&self.d)
        } else {
            format!("√{}", self.d)
        };
        let sign = if self.b.is_negative() { "-" } else { "+" };
        let coeff = self.b.abs();
        let coeff = if coeff.is_one() { String::new() } else { format!("({coeff})") };
        if self.a.is_zero() {
            let lead = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{lead}{coeff}{radical}")
        } else {
            write!(f, "{} {sign} {coeff}{radical}", self.a)
        }
    }
}

/// `n = k² d` with `d` square-free (up to trial division by small primes,
/// then a final perfect-square test).
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let negative = n.is_negative();
    let mut rest = n.abs();
    let mut k = BigInt::one();
    let mut d = BigInt::one();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(100_000);
    while &p * &p <= rest && p < limit {
        let mut count = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            count += 1;
        }
        for _ in 0..count / 2 {
            k *= &p;
        }
        if count % 2 == 1 {
            d *= &p;
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        k *= r;
    } else {
        d *= rest;
    }
    if negative {
        d = -d;
    }
    (k, d)
}

/// `√q` rounded to `2^-APPROX_BITS`, for `q ≥ 0`.
fn sqrt_rational(q: &BigRational) -> BigRational {
    let scale = BigInt::one() << (2 * APPROX_BITS);
    let scaled = (q * BigRational::from_integer(scale)).to_integer();
    let root = scaled.sqrt();
    round_to_bits(&BigRational::new(root, BigInt::one() << APPROX_BITS), APPROX_BITS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{gauss_to_f64, int, rat};

    #[test]
    fn radicand_normalization() {
        let s = Surd::new(rat(1, 2), rat(1, 2), &int(20));
        assert_eq!(s, Surd { a: rat(1, 2), b: int(1), d: BigInt::from(5) });
        let r = Surd::new(int(1), int(1), &rat(9, 4));
        assert_eq!(r, Surd::rational(rat(5, 2)));
        let i = Surd::new(int(0), int(3), &int(-4));
        assert_eq!(i.exact_value(), Some(Complex::new(int(0), int(6))));
    }

    #[test]
    fn display_and_value() {
        let golden = Surd::new(rat(1, 2), rat(1, 2), &int(5));
        assert_eq!(golden.to_string(), "1/2 + (1/2)√5");
        let v = gauss_to_f64(&golden.approx_value());
        assert!((v.re - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert_eq!(golden.conj_radical().to_string(), "1/2 - (1/2)√5");
    }
}
