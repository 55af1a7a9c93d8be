//! Dense univariate polynomials over a field.
//!
//! Coefficients are stored lowest degree first and kept trimmed, so the zero
//! polynomial is the empty vector.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Num;

/// Coefficient field for [`Poly`].
pub trait Field: Clone + Debug + PartialEq + Num + Neg<Output = Self> {
    fn from_i64(k: i64) -> Self;
}

impl Field for f64 {
    fn from_i64(k: i64) -> Self {
        k as f64
    }
}

impl Field for BigRational {
    fn from_i64(k: i64) -> Self {
        BigRational::from_integer(BigInt::from(k))
    }
}

impl<T: Field> Field for Complex<T> {
    fn from_i64(k: i64) -> Self {
        Complex::new(T::from_i64(k), T::zero())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T: Field> {
    coeffs: Vec<T>,
}

impl<T: Field> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// `x - root`
    pub fn linear_root(root: T) -> Self {
        Poly::new(vec![-root, T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = T::one() / self.lead();
        self.scale(&inv)
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_i64(k as i64))
                .collect(),
        )
    }

    /// `k`-th derivative.
    pub fn derivative_n(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = T::one() / divisor.lead();
        let mut rem = self.coeffs.clone();
        let nd = match self.degree() {
            Some(d) if d >= dd => d,
            _ => return (Poly::zero(), self.clone()),
        };
        let mut quot = vec![T::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd].clone() * lead_inv.clone();
            if !c.is_zero() {
                for (j, dj) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - c.clone() * dj.clone();
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Coefficients of the expansion around `p`: `self(x) = Σ c_k (x - p)^k`.
    pub fn taylor_at(&self, p: &T) -> Vec<T> {
        // repeated synthetic division
        let mut work = self.coeffs.clone();
        let n = work.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            for k in (i..n - 1).rev() {
                let carry = work[k + 1].clone() * p.clone();
                work[k] = work[k].clone() + carry;
            }
            out.push(work[i].clone());
        }
        out
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Field> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Field> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Field> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Field> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Field> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Poly<T>) -> Poly<T> {
        &self + &rhs
    }
}

impl<T: Field> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Poly<T>) -> Poly<T> {
        &self * &rhs
    }
}

/// Square-free decomposition (Yun): returns `(factor, multiplicity)` with
/// monic, pairwise coprime, square-free factors whose product (with
/// multiplicities) is `p / lead(p)`.
pub fn squarefree_decomposition(p: &Poly<BigRational>) -> Vec<(Poly<BigRational>, usize)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let p = p.monic();
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.div_rem(&a0).0;
    let mut c = dp.div_rem(&a0).0;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    loop {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_rem(&a).0;
        if b.degree().unwrap_or(0) == 0 {
            break;
        }
        c = d.div_rem(&a).0;
        d = &c - &b.derivative();
        i += 1;
    }
    out
}
