//! Exact checks of binomial identities that come out of transforming
//! Laguerre and Legendre polynomials.
//!
//! Laguerre: `Σ_k (-1)^k C(m,k) L_k(x) = x^m/m!` maps, term by term, to
//! `Σ_k C(m,k) Σ_j (-1)^{k+j} s^{-j} C(k,j) C(n+j,j) = C(m+n,n) s^{-m}`.
//!
//! Legendre: pulling `P_n` back along `x = 1 - 2e^{-t}` gives
//! `p_n(t) = Σ_j A_{n,j} e^{-jt}`, and Bonnet's recursion turns into
//! three-term relations between rows of the `A` table.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binom, binom_q, int, rat, rat_from_f64, rat_to_f64};
use crate::poly::Poly;

fn sign(k: i64) -> BigRational {
    if k.rem_euclid(2) == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

fn pow_q(x: &BigRational, k: i64) -> BigRational {
    num_traits::pow(x.clone(), k as usize)
}

/// Image of `L_m` at index `n`:
/// `Σ_k (-1)^k C(m,k) C(n+k,k) / s^{n+k+1}`.
pub fn laguerre_image_term(m: usize, n: usize, s: &BigRational) -> Result<BigRational> {
    if s.is_zero() {
        return Err(Error::ZeroAbscissa);
    }
    let inv = s.recip();
    let (m, n) = (m as i64, n as i64);
    Ok((0..=m).fold(BigRational::zero(), |acc, k| {
        acc + sign(k) * binom_q(m, k) * binom_q(n + k, k) * pow_q(&inv, n + k + 1)
    }))
}

/// Both sides of an identity instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl Witness {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `Σ_{j=0}^{k} (-1)^j s^{-j} C(k,j) C(n+j,j)`.
fn laguerre_inner(k: i64, n: i64, inv: &BigRational) -> BigRational {
    let mut power = BigRational::one();
    let mut acc = BigRational::zero();
    for j in 0..=k {
        acc += sign(j) * binom_q(k, j) * binom_q(n + j, j) * &power;
        power *= inv;
    }
    acc
}

fn laguerre_sides(m: i64, n: i64, s: &BigRational, inner: impl Fn(i64) -> BigRational) -> Witness {
    let lhs = (0..=m).fold(BigRational::zero(), |acc, k| acc + sign(k) * binom_q(m, k) * inner(k));
    let rhs = binom_q(m + n, n) * pow_q(&s.recip(), m);
    Witness { lhs, rhs }
}

/// The Laguerre identity at `(m, n, s)`; `s` must be nonzero.
pub fn verify_laguerre_identity(m: usize, n: usize, s: &BigRational) -> Result<Witness> {
    if s.is_zero() {
        return Err(Error::ZeroAbscissa);
    }
    let inv = s.recip();
    Ok(laguerre_sides(m as i64, n as i64, s, |k| laguerre_inner(k, n as i64, &inv)))
}

/// `A_{n,j} = Σ_k (-1)^{j+k} 2^{j-n} C(n,k) C(2n-2k,n) C(n-2k,j)`.
pub fn legendre_a(n: i64, j: i64) -> Result<BigRational> {
    if n < 0 || j < 0 || j > n {
        return Err(Error::IndexOutOfRange { n, j });
    }
    Ok(legendre_a_unchecked(n, j))
}

/// `A_{n,j}`, zero outside `0 ≤ j ≤ n`.
fn legendre_a_unchecked(n: i64, j: i64) -> BigRational {
    if n < 0 || j < 0 || j > n {
        return BigRational::zero();
    }
    let sum = (0..=n / 2).fold(BigInt::zero(), |acc, k| {
        let term = binom(n, k) * binom(2 * n - 2 * k, n) * binom(n - 2 * k, j);
        if (j + k) % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    });
    BigRational::new(sum, BigInt::one() << (n - j) as usize)
}

/// Rows `0..=n_max` of the `A` table from its closed sum.
pub fn legendre_table(n_max: usize) -> Vec<Vec<BigRational>> {
    (0..=n_max as i64).map(|n| (0..=n).map(|j| legendre_a_unchecked(n, j)).collect()).collect()
}

/// Rows `0..=n_max` by expanding `P_n(1 - 2u)` in powers of `u`, with `P_n`
/// from the standard three-term recurrence in `x`.
pub fn legendre_table_by_expansion(n_max: usize) -> Vec<Vec<BigRational>> {
    let x = Poly::new(vec![BigRational::zero(), BigRational::one()]);
    let mut p: Vec<Poly<BigRational>> = vec![Poly::one(), x.clone()];
    for m in 1..n_max as i64 {
        let next = &(&x * &p[m as usize]).scale(&int(2 * m + 1)) - &p[m as usize - 1].scale(&int(m));
        p.push(next.scale(&rat(1, m + 1)));
    }
    p.truncate(n_max + 1);
    let substitute = Poly::new(vec![int(1), int(-2)]);
    p.iter()
        .enumerate()
        .map(|(n, pn)| {
            // Horner in x = 1 - 2u
            let composed = pn.coeffs().iter().rev().fold(Poly::zero(), |acc, c| &(&acc * &substitute) + &Poly::constant(c.clone()));
            (0..=n).map(|j| composed.coeff(j)).collect()
        })
        .collect()
}

/// `C(2m+2, m+1) = (4m+2)/(m+1) C(2m, m)`.
pub fn verify_identity_1(m: usize) -> Witness {
    let m = m as i64;
    Witness { lhs: binom_q(2 * m + 2, m + 1), rhs: rat(4 * m + 2, m + 1) * binom_q(2 * m, m) }
}

/// `Σ_k (-1)^k C(n,k) C(2n-2k,n) C(n-2k+shift, j)` over `k ≤ n/2`.
fn legendre_sum(n: i64, j: i64, shift: i64) -> BigRational {
    if n < 0 {
        return BigRational::zero();
    }
    BigRational::from_integer((0..=n / 2).fold(BigInt::zero(), |acc, k| {
        let term = binom(n, k) * binom(2 * n - 2 * k, n) * binom(n - 2 * k + shift, j);
        if k % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    }))
}

/// The three-term relation among `Σ_k (-1)^k C(n,k) C(2n-2k,n)` for
/// `n = m+1, m, m-1`; `m ≥ 1`.
pub fn verify_identity_2(m: usize) -> Witness {
    let m = m as i64;
    Witness {
        lhs: legendre_sum(m + 1, 0, 0),
        rhs: rat(4 * m + 2, m + 1) * legendre_sum(m, 0, 0) - rat(4 * m, m + 1) * legendre_sum(m - 1, 0, 0),
    }
}

/// The general relation with the extra factor `C(·, j)`, for
/// `1 ≤ j ≤ m-1`.
pub fn verify_identity_3(m: usize, j: usize) -> Witness {
    let (m, j) = (m as i64, j as i64);
    Witness {
        lhs: legendre_sum(m + 1, j, 0),
        rhs: rat(4 * m + 2, m + 1) * legendre_sum(m, j, 1) - rat(4 * m, m + 1) * legendre_sum(m - 1, j, 0),
    }
}

/// Bonnet's recursion on the `A` table for one `m ≥ 1`: the interior
/// relation for every `j` and the two endpoint relations. Returns the
/// failing `j` values (`m+1` stands for the top endpoint).
pub fn bonnet_mapped_check(m: usize) -> Vec<i64> {
    let m = m as i64;
    let a = legendre_a_unchecked;
    let mut failures = Vec::new();
    for j in 0..=m + 1 {
        let lhs = int(m + 1) * a(m + 1, j);
        let rhs = int(2 * m + 1) * (a(m, j) - int(2) * a(m, j - 1)) - int(m) * a(m - 1, j);
        if lhs != rhs {
            failures.push(j);
        }
    }
    let top = int(m + 1) * a(m + 1, m + 1) == int(-2) * int(2 * m + 1) * a(m, m);
    let bottom = int(m + 1) * a(m + 1, 0) == int(2 * m + 1) * a(m, 0) - int(m) * a(m - 1, 0);
    if !top && !failures.contains(&(m + 1)) {
        failures.push(m + 1);
    }
    if !bottom && !failures.contains(&0) {
        failures.push(0);
    }
    failures
}

/// `Σ_j A_{n,j} e^{-jt}`. The polynomial is summed exactly at the double
/// nearest to `e^{-t}` and rounded once, since the coefficients alternate
/// and reach 10^19 by `n = 30`.
pub fn legendre_mapped_eval(n: usize, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParams(format!("t = {t} must be nonnegative")));
    }
    let u = rat_from_f64((-t).exp()).ok_or_else(|| Error::InvalidParams("e^{-t} is not finite".into()))?;
    let row: Vec<BigRational> = (0..=n as i64).map(|j| legendre_a_unchecked(n as i64, j)).collect();
    Ok(rat_to_f64(&Poly::new(row).eval(&u)))
}

/// `P_n(x)` by Bonnet's recursion in double precision.
pub fn legendre_eval(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return 1.0;
    }
    for m in 1..n {
        let m = m as f64;
        (prev, cur) = (cur, ((2.0 * m + 1.0) * x * cur - m * prev) / (m + 1.0));
    }
    cur
}

/// Which family a sweep covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    /// `C(2m+2, m+1) = (4m+2)/(m+1) C(2m, m)`.
    CentralBinomial,
    /// Three-term relation for `A_{·,0}`.
    LegendreConstant,
    /// Three-term relation for `A_{·,j}`, `1 ≤ j ≤ m-1`.
    LegendreGeneral,
    /// The Laguerre double-sum identity at `s ∈ {1, 2, 1/3}`.
    Laguerre,
    /// Bonnet's recursion on the `A` table.
    Bonnet,
    /// Closed-sum table against direct expansion.
    LegendreTable,
}

impl Identity {
    pub const ALL: [Identity; 6] = [
        Identity::CentralBinomial,
        Identity::LegendreConstant,
        Identity::LegendreGeneral,
        Identity::Laguerre,
        Identity::Bonnet,
        Identity::LegendreTable,
    ];

    /// Upper limit of the standard sweep.
    pub fn default_range(self) -> usize {
        match self {
            Identity::CentralBinomial => 200,
            Identity::LegendreConstant | Identity::Bonnet => 80,
            Identity::LegendreGeneral => 60,
            Identity::Laguerre | Identity::LegendreTable => 40,
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "1" | "central-binomial" => Identity::CentralBinomial,
            "2" | "legendre-constant" => Identity::LegendreConstant,
            "3" | "legendre-general" => Identity::LegendreGeneral,
            "laguerre" => Identity::Laguerre,
            "bonnet" => Identity::Bonnet,
            "legendre-table" | "table" => Identity::LegendreTable,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub case: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity: Identity,
    pub range: String,
    pub checked: usize,
    pub all_passed: bool,
    pub counterexamples: Vec<Counterexample>,
}

fn par_map<T: Send>(items: Vec<usize>, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

fn report(identity: Identity, range: String, results: Vec<Vec<(String, Witness)>>) -> IdentityReport {
    let all: Vec<(String, Witness)> = results.into_iter().flatten().collect();
    let checked = all.len();
    let counterexamples: Vec<Counterexample> = all
        .into_iter()
        .filter(|(_, w)| !w.holds())
        .map(|(case, w)| Counterexample { case, lhs: w.lhs.to_string(), rhs: w.rhs.to_string() })
        .collect();
    IdentityReport { identity, range, checked, all_passed: counterexamples.is_empty(), counterexamples }
}

/// Laguerre abscissae of the standard sweep.
pub fn laguerre_abscissae() -> [BigRational; 3] {
    [int(1), int(2), rat(1, 3)]
}

/// Runs one identity family up to `max` (its `m`, or `m` and `n` together
/// for the Laguerre identity, or `n` for the table).
pub fn sweep(identity: Identity, max: usize) -> IdentityReport {
    match identity {
        Identity::CentralBinomial => {
            let r = par_map((1..=max).collect(), |m| vec![(format!("m={m}"), verify_identity_1(m))]);
            report(identity, format!("1 ≤ m ≤ {max}"), r)
        }
        Identity::LegendreConstant => {
            let r = par_map((1..=max).collect(), |m| vec![(format!("m={m}"), verify_identity_2(m))]);
            report(identity, format!("1 ≤ m ≤ {max}"), r)
        }
        Identity::LegendreGeneral => {
            let r = par_map((2..=max).collect(), |m| {
                (1..m).map(|j| (format!("m={m}, j={j}"), verify_identity_3(m, j))).collect()
            });
            report(identity, format!("2 ≤ m ≤ {max}, 1 ≤ j ≤ m-1"), r)
        }
        Identity::Laguerre => {
            let abscissae = laguerre_abscissae();
            let cells: Vec<usize> = (0..abscissae.len() * (max + 1)).collect();
            let r = par_map(cells, |cell| {
                let (si, n) = (cell / (max + 1), (cell % (max + 1)) as i64);
                let s = &abscissae[si];
                let inv = s.recip();
                // the inner sums depend on (k, n, s) only, so share them across m
                let inner: Vec<BigRational> = (0..=max as i64).map(|k| laguerre_inner(k, n, &inv)).collect();
                (0..=max as i64)
                    .map(|m| (format!("m={m}, n={n}, s={s}"), laguerre_sides(m, n, s, |k| inner[k as usize].clone())))
                    .collect()
            });
            report(identity, format!("0 ≤ m, n ≤ {max}, s ∈ {{1, 2, 1/3}}"), r)
        }
        Identity::Bonnet => {
            let r = par_map((1..=max).collect(), |m| {
                bonnet_mapped_check(m)
                    .into_iter()
                    .map(|j| {
                        let m = m as i64;
                        let a = legendre_a_unchecked;
                        let lhs = int(m + 1) * a(m + 1, j);
                        let rhs = int(2 * m + 1) * (a(m, j) - int(2) * a(m, j - 1)) - int(m) * a(m - 1, j);
                        (format!("m={m}, j={j}"), Witness { lhs, rhs })
                    })
                    .collect()
            });
            // every m contributes its interior and endpoint relations
            let mut rep = report(identity, format!("1 ≤ m ≤ {max}"), r);
            rep.checked = (1..=max).map(|m| m + 4).sum();
            rep
        }
        Identity::LegendreTable => {
            let closed = legendre_table(max);
            let expanded = legendre_table_by_expansion(max);
            let r = (0..=max)
                .map(|n| {
                    (0..=n)
                        .map(|j| (format!("n={n}, j={j}"), Witness { lhs: closed[n][j].clone(), rhs: expanded[n][j].clone() }))
                        .collect()
                })
                .collect();
            report(identity, format!("0 ≤ j ≤ n ≤ {max}"), r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_image_values() {
        for n in 0..5 {
            let s = rat(3, 2);
            assert_eq!(laguerre_image_term(0, n, &s).unwrap(), pow_q(&s.recip(), n as i64 + 1));
        }
        assert_eq!(laguerre_image_term(1, 0, &int(1)).unwrap(), int(0));
        // L_2(t) = 1 - 2t + t²/2; image at n = 1, s = 2 is 1/4 - 2·2/8 + 3/16
        assert_eq!(laguerre_image_term(2, 1, &int(2)).unwrap(), rat(1, 4) - rat(1, 2) + rat(3, 16));
        assert_eq!(laguerre_image_term(2, 1, &int(0)), Err(Error::ZeroAbscissa));
    }

    #[test]
    fn laguerre_identity_examples() {
        let w = verify_laguerre_identity(0, 7, &rat(2, 5)).unwrap();
        assert_eq!(w, Witness { lhs: int(1), rhs: int(1) });
        let w = verify_laguerre_identity(3, 2, &int(1)).unwrap();
        assert_eq!(w.rhs, int(10));
        assert!(w.holds());
    }

    #[test]
    fn small_a_table() {
        assert_eq!(legendre_a(0, 0).unwrap(), int(1));
        assert_eq!(legendre_a(1, 0).unwrap(), int(1));
        assert_eq!(legendre_a(1, 1).unwrap(), int(-2));
        let row2: Vec<BigRational> = (0..=2).map(|j| legendre_a(2, j).unwrap()).collect();
        assert_eq!(row2, vec![int(1), int(-6), int(6)]);
        assert_eq!(legendre_a(2, 3), Err(Error::IndexOutOfRange { n: 2, j: 3 }));
        assert_eq!(legendre_a(2, -1), Err(Error::IndexOutOfRange { n: 2, j: -1 }));
    }

    #[test]
    fn identity_examples() {
        assert_eq!(verify_identity_1(1), Witness { lhs: int(6), rhs: int(6) });
        let w = verify_identity_2(2);
        // Σ_{k≤1} (-1)^k C(3,k) C(6-2k,3) = 20 - 12
        assert_eq!(w.lhs, int(8));
        assert!(w.holds());
        assert!(verify_identity_3(4, 2).holds());
        assert!(bonnet_mapped_check(1).is_empty());
    }

    #[test]
    fn mapped_evaluation() {
        assert_eq!(legendre_mapped_eval(0, 0.3).unwrap(), 1.0);
        assert!(legendre_mapped_eval(1, std::f64::consts::LN_2).unwrap().abs() < 1e-16);
        let x = 1.0 - 2.0 * (-1.0f64).exp();
        assert!((legendre_mapped_eval(5, 1.0).unwrap() - legendre_eval(5, x)).abs() < 1e-12);
        assert!(legendre_mapped_eval(3, -1.0).is_err());
    }

    #[test]
    fn short_sweeps() {
        for id in Identity::ALL {
            let r = sweep(id, 12);
            assert!(r.all_passed, "{r:?}");
            assert!(r.checked > 0);
        }
    }
}
