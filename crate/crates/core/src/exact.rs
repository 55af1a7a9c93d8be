//! Exact arithmetic helpers: big rationals, Gaussian rationals and binomials.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in canonical form by `num-rational`.
pub type ExactRational = BigRational;

/// Complex number with rational real and imaginary parts.
pub type GaussRational = Complex<BigRational>;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact binary value of a finite float.
pub fn rat_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

pub fn rat_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn gauss_to_f64(z: &GaussRational) -> Complex<f64> {
    Complex::new(rat_to_f64(&z.re), rat_to_f64(&z.im))
}

pub fn gauss(re: BigRational, im: BigRational) -> GaussRational {
    Complex::new(re, im)
}

pub fn gauss_real(re: BigRational) -> GaussRational {
    Complex::new(re, BigRational::zero())
}

/// Round to the nearest multiple of `2^-bits`. Keeps Newton iterates from
/// growing without bound.
pub fn round_to_bits(q: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = q * BigRational::from_integer(scale.clone());
    let r = scaled.round();
    BigRational::new(r.to_integer(), scale)
}

pub fn round_gauss(z: &GaussRational, bits: u32) -> GaussRational {
    Complex::new(round_to_bits(&z.re, bits), round_to_bits(&z.im, bits))
}

/// Binomial coefficient with the convention `C(n, k) = 0` for `k < 0` or
/// `k > n >= 0`. A negative upper index uses `C(n, k) = (-1)^k C(k - n - 1, k)`.
pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n >= 0 {
        if k > n {
            return BigInt::zero();
        }
        let k = k.min(n - k);
        let mut acc = BigInt::one();
        for i in 0..k {
            acc *= BigInt::from(n - i);
            acc /= BigInt::from(i + 1);
        }
        acc
    } else {
        let c = binom(k - n - 1, k);
        if k.is_odd() {
            -c
        } else {
            c
        }
    }
}

pub fn binom_q(n: i64, k: i64) -> BigRational {
    BigRational::from_integer(binom(n, k))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient as a float, for the moderate sizes used in sums.
pub fn binom_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    // exact integers below 2^53 pick up rounding noise in the running product
    if acc < 9.0e15 {
        acc.round()
    } else {
        acc
    }
}

/// `|z|^2` compared against `bound^2` without square roots.
pub fn gauss_abs_le(z: &GaussRational, bound: &BigRational) -> bool {
    let n2 = &z.re * &z.re + &z.im * &z.im;
    n2 <= bound * bound
}

pub fn max_abs(coeffs: &[BigRational]) -> BigRational {
    coeffs
        .iter()
        .map(|c| c.abs())
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(n: usize) -> Vec<Vec<BigInt>> {
        let mut rows = vec![vec![BigInt::one()]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![BigInt::one(); i + 1];
            for j in 1..i {
                row[j] = &prev[j - 1] + &prev[j];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binom(4, 2), BigInt::from(6));
        assert_eq!(binom(5, 7), BigInt::zero());
        assert_eq!(binom(5, -1), BigInt::zero());
        let expected: BigInt = "118264581564861424".parse().unwrap();
        assert_eq!(binom(60, 30), expected);
    }

    #[test]
    fn binomial_matches_pascal_triangle() {
        let rows = pascal(70);
        for (n, row) in rows.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                assert_eq!(&binom(n as i64, k as i64), c, "C({n},{k})");
            }
        }
    }

    #[test]
    fn negative_upper_index() {
        // C(-1, k) = (-1)^k
        for k in 0..6 {
            let expected = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(binom(-1, k), BigInt::from(expected));
        }
        assert_eq!(binom(-3, 2), BigInt::from(6));
    }

    #[test]
    fn rounding_keeps_value_close() {
        let q = rat(1, 3);
        let r = round_to_bits(&q, 60);
        let diff = (&q - &r).abs();
        assert!(diff <= BigRational::new(BigInt::one(), BigInt::one() << 61u32));
    }

    #[test]
    fn float_binomial() {
        assert_eq!(binom_f64(10, 3), 120.0);
        assert_eq!(binom_f64(3, 5), 0.0);
    }
}
