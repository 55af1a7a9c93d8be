//! Rational images and their inverse by residues.
//!
//! A proper rational image `F(s) = N(s)/D(s)` is split into partial fractions
//! `Σ c/(s-p)^m`, and each fraction inverts to `c t^{m-1} e^{pt}/(m-1)!`.
//! Summing over every pole is exact for proper rational functions, so the
//! Bromwich contour itself never appears.

mod roots;

pub use roots::{sturm_real_root_count, upper_half_roots, Root};

use std::cmp::Ordering;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{factorial, gauss_real, gauss_to_f64, rat_from_f64, rat_to_f64, GaussRational};
use crate::poly::{squarefree_decomposition, Poly};
use crate::transform::{ClosedImage, ImageRule};

type GaussPoly = Poly<GaussRational>;

/// `num / den` with rational coefficients, reduced and with a monic
/// denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn {
    num: Poly<BigRational>,
    den: Poly<BigRational>,
}

impl RationalFn {
    pub fn new(num: Poly<BigRational>, den: Poly<BigRational>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidParams("zero denominator".into()));
        }
        let g = num.gcd(&den);
        let (num, den) = if num.is_zero() {
            (num, Poly::one())
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lead = den.lead();
        Ok(RationalFn { num: num.scale(&(BigRational::one() / &lead)), den: den.monic() })
    }

    /// `c / (s - p)^m` for rational `p`.
    pub fn pole(c: BigRational, p: BigRational, m: usize) -> Self {
        RationalFn::new(Poly::constant(c), Poly::linear_root(p).pow(m)).expect("nonzero denominator")
    }

    pub fn numerator(&self) -> &Poly<BigRational> {
        &self.num
    }

    pub fn denominator(&self) -> &Poly<BigRational> {
        &self.den
    }

    pub fn is_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() < self.den.degree()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RationalFn::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        RationalFn::new(num, &self.den * &other.den).expect("nonzero denominator")
    }

    /// `F(s - a)`.
    pub fn shift(&self, a: &BigRational) -> Self {
        let sub = |p: &Poly<BigRational>| {
            // coefficients of p(x - a) from the expansion around -a
            Poly::new(p.taylor_at(&-a))
        };
        RationalFn::new(sub(&self.num), sub(&self.den)).expect("nonzero denominator")
    }

    pub fn eval(&self, s: f64) -> f64 {
        let f = |p: &Poly<BigRational>| p.coeffs().iter().rev().fold(0.0, |acc, c| acc * s + rat_to_f64(c));
        f(&self.num) / f(&self.den)
    }

    /// `n! φ_n(s)` for the closed-form rules whose images are rational in `s`.
    pub fn from_closed_image(image: &ClosedImage, n: usize) -> Result<Self> {
        rational_rule(image.rule(), n)
    }
}

fn exact_param(x: f64) -> Result<BigRational> {
    rat_from_f64(x).ok_or_else(|| Error::InvalidParams(format!("parameter {x} is not finite")))
}

fn nonnegative_integer(a: f64) -> Result<usize> {
    if a >= 0.0 && a == a.floor() && a < 1e6 {
        Ok(a as usize)
    } else {
        Err(Error::InvalidParams(format!("power {a} is not a nonnegative integer, so the image is not rational")))
    }
}

fn rational_rule(rule: &ImageRule, n: usize) -> Result<RationalFn> {
    let n_fact = BigRational::from_integer(factorial(n as u64));
    match rule {
        ImageRule::Exp { a } => Ok(RationalFn::pole(n_fact, exact_param(*a)?, n + 1)),
        ImageRule::Power { a } => {
            let k = nonnegative_integer(*a)?;
            Ok(RationalFn::pole(BigRational::from_integer(factorial((k + n) as u64)), BigRational::zero(), n + k + 1))
        }
        ImageRule::PowerExp { a, b } => {
            let k = nonnegative_integer(*a)?;
            Ok(RationalFn::pole(BigRational::from_integer(factorial((k + n) as u64)), -exact_param(*b)?, n + k + 1))
        }
        ImageRule::Sin { a } | ImageRule::Cos { a } => {
            // n!/(s - ia)^{n+1} = n! (s + ia)^{n+1} / (s² + a²)^{n+1}
            let a = exact_param(*a)?;
            let conj = GaussPoly::new(vec![Complex::new(BigRational::zero(), a.clone()), Complex::one()]).pow(n + 1);
            let pick = |z: &GaussRational| match rule {
                ImageRule::Sin { .. } => z.im.clone(),
                _ => z.re.clone(),
            };
            let num = Poly::new(conj.coeffs().iter().map(pick).collect()).scale(&n_fact);
            let den = Poly::new(vec![&a * &a, BigRational::zero(), BigRational::one()]).pow(n + 1);
            RationalFn::new(num, den)
        }
        ImageRule::ExpShift { a, base } => Ok(rational_rule(base, n)?.shift(&exact_param(*a)?)),
        ImageRule::Composite { terms } => {
            let mut acc = RationalFn::new(Poly::zero(), Poly::one())?;
            for (c, r) in terms {
                acc = acc.add(&rational_rule(r, n)?.scale(&exact_param(*c)?));
            }
            Ok(acc)
        }
        ImageRule::Delay { .. } | ImageRule::Log => {
            Err(Error::InvalidParams("image is not a rational function of s".into()))
        }
    }
}

/// One partial fraction `c / (s - p)^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFraction {
    pub c: GaussRational,
    pub p: GaussRational,
    pub m: usize,
    /// Whether `p` (and hence `c`) is exact.
    pub exact: bool,
}

/// Partial-fraction decomposition over all poles, conjugate pairs included.
pub fn partial_fractions(r: &RationalFn) -> Result<Vec<PartialFraction>> {
    if !r.is_proper() {
        return Err(Error::ImproperRational {
            num: r.num.degree().unwrap_or(0),
            den: r.den.degree().unwrap_or(0),
        });
    }
    if r.num.is_zero() {
        return Ok(Vec::new());
    }
    // every pole with its multiplicity; only the upper half plane is solved
    let mut poles: Vec<(Root, usize)> = Vec::new();
    for (factor, mult) in squarefree_decomposition(&r.den) {
        for root in upper_half_roots(&factor)? {
            poles.push((root, mult));
        }
    }
    let all: Vec<(GaussRational, usize)> = poles
        .iter()
        .flat_map(|(root, m)| {
            let mut v = vec![(root.value.clone(), *m)];
            if !root.is_real() {
                v.push((root.value.conj(), *m));
            }
            v
        })
        .collect();
    let num = r.num.map(|c| gauss_real(c.clone()));
    let mut out = Vec::new();
    for (root, m) in &poles {
        let p = &root.value;
        // D(s) = (s-p)^m · rest(s)
        let rest = all
            .iter()
            .filter(|(q, _)| q != p)
            .fold(GaussPoly::one(), |acc, (q, k)| &acc * &GaussPoly::linear_root(q.clone()).pow(*k));
        let n_series = num.taylor_at(p);
        let d_series = rest.taylor_at(p);
        // series quotient g = N/rest around p, first m coefficients
        let mut g: Vec<GaussRational> = Vec::with_capacity(*m);
        for i in 0..*m {
            let mut acc = n_series.get(i).cloned().unwrap_or_else(GaussRational::zero);
            for j in 1..=i {
                if let Some(dj) = d_series.get(j) {
                    acc -= dj * &g[i - j];
                }
            }
            g.push(acc / &d_series[0]);
        }
        for (i, c) in g.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = m - i;
            if !root.is_real() {
                out.push(PartialFraction { c: c.conj(), p: p.conj(), m: power, exact: root.exact });
            }
            out.push(PartialFraction { c, p: p.clone(), m: power, exact: root.exact });
        }
    }
    Ok(out)
}

/// One term `c t^{m-1} e^{pt} / (m-1)!`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpTerm {
    pub c: GaussRational,
    pub p: GaussRational,
    pub m: usize,
    pub exact: bool,
}

impl Serialize for ExpTerm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let c = gauss_to_f64(&self.c);
        let p = gauss_to_f64(&self.p);
        let mut st = serializer.serialize_struct("ExpTerm", 5)?;
        st.serialize_field("re_c", &c.re)?;
        st.serialize_field("im_c", &c.im)?;
        st.serialize_field("re_p", &p.re)?;
        st.serialize_field("im_p", &p.im)?;
        st.serialize_field("m", &self.m)?;
        st.end()
    }
}

/// `f(t) = Σ c t^{m-1} e^{pt} / (m-1)!`, closed under conjugation.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ExpPolyFunction {
    pub terms: Vec<ExpTerm>,
}

impl Serialize for ExpPolyFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(1))?;
        map.serialize_entry("terms", &self.terms)?;
        map.end()
    }
}

fn cmp_gauss(a: &GaussRational, b: &GaussRational) -> Ordering {
    a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im))
}

impl ExpPolyFunction {
    /// Merges equal `(p, m)` pairs, drops zero terms and sorts.
    pub fn canonical(mut terms: Vec<ExpTerm>) -> Self {
        terms.sort_by(|x, y| cmp_gauss(&x.p, &y.p).then(x.m.cmp(&y.m)));
        let mut out: Vec<ExpTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.p == t.p && last.m == t.m => {
                    last.c = &last.c + &t.c;
                    last.exact &= t.exact;
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.c.is_zero());
        ExpPolyFunction { terms: out }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| {
                let c = gauss_to_f64(&term.c);
                let p = gauss_to_f64(&term.p);
                let k = term.m - 1;
                let poly = if k == 0 {
                    1.0
                } else {
                    (k as f64 * t.ln() - crate::special::ln_gamma(k as f64 + 1.0)).exp()
                };
                (c * (p * t).exp()).re * poly
            })
            .sum()
    }

    /// Every term with complex pole has its conjugate partner.
    pub fn is_conjugate_closed(&self) -> bool {
        self.terms.iter().all(|t| {
            t.p.im.is_zero() && t.c.im.is_zero()
                || self.terms.iter().any(|u| u.m == t.m && u.p == t.p.conj() && u.c == t.c.conj())
        })
    }

    /// Symbolic transform back to `Σ c/(s-p)^m`, combined over a common
    /// denominator. Fails when the combination is not real.
    pub fn laplace(&self) -> Result<RationalFn> {
        let mut num = GaussPoly::zero();
        let mut den = GaussPoly::one();
        for t in &self.terms {
            let factor = GaussPoly::linear_root(t.p.clone()).pow(t.m);
            num = &(&num * &factor) + &den.scale(&t.c);
            den = &den * &factor;
        }
        let real = |p: &GaussPoly| -> Result<Poly<BigRational>> {
            if p.coeffs().iter().any(|c| !c.im.is_zero()) {
                return Err(Error::InvalidParams("transform has non-real coefficients".into()));
            }
            Ok(Poly::new(p.coeffs().iter().map(|c| c.re.clone()).collect()))
        };
        RationalFn::new(real(&num)?, real(&den)?)
    }

    /// Term-by-term agreement: exact where both sides are exact, otherwise
    /// within `rel_tol` relative to the larger coefficient.
    pub fn matches(&self, other: &Self, rel_tol: f64) -> bool {
        if self.terms.len() != other.terms.len() {
            return false;
        }
        self.terms.iter().zip(&other.terms).all(|(a, b)| {
            if a.m != b.m {
                return false;
            }
            if a.exact && b.exact {
                return a.c == b.c && a.p == b.p;
            }
            let close = |x: &GaussRational, y: &GaussRational| {
                let d = gauss_to_f64(&(x - y)).norm();
                d <= rel_tol * gauss_to_f64(x).norm().max(gauss_to_f64(y).norm()).max(1e-300)
            };
            close(&a.c, &b.c) && close(&a.p, &b.p)
        })
    }
}

/// Inverse transform of a proper rational function.
pub fn inverse_laplace_rational(r: &RationalFn) -> Result<ExpPolyFunction> {
    let terms = partial_fractions(r)?
        .into_iter()
        .map(|pf| ExpTerm { c: pf.c, p: pf.p, m: pf.m, exact: pf.exact })
        .collect();
    Ok(ExpPolyFunction::canonical(terms))
}

/// Divides `g(t)` by `t^n`: `t^{m-1}/(m-1)! → t^{m-n-1}/(m-n-1)!` with the
/// coefficient rescaled by `(m-n-1)!/(m-1)!`.
pub fn divide_by_power(g: &ExpPolyFunction, n: usize) -> Result<ExpPolyFunction> {
    let mut terms = Vec::with_capacity(g.terms.len());
    for t in &g.terms {
        if t.m - 1 < n {
            return Err(Error::NonCancellingPower { n, power: t.m - 1 });
        }
        let m = t.m - n;
        let ratio = BigRational::new(factorial((m - 1) as u64), factorial((t.m - 1) as u64));
        terms.push(ExpTerm { c: t.c.scale(ratio), p: t.p.clone(), m, exact: t.exact });
    }
    Ok(ExpPolyFunction::canonical(terms))
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidueReport {
    pub n: usize,
    pub probes: Vec<usize>,
    /// Whether every probe index produced the same function.
    pub n_independent: bool,
    pub conjugate_closed: bool,
    pub function: ExpPolyFunction,
}

const PROBES: [usize; 4] = [0, 1, 2, 3];

/// `f(t) = (n!/tⁿ) Σ res e^{st} φ_n(s)`. `rule(n)` must return `n! φ_n(s)`.
/// The result is recomputed at probe indices 0..=3 to confirm it does not
/// depend on `n`.
pub fn residue_inverse<F>(rule: F, n: usize) -> Result<ResidueReport>
where
    F: Fn(usize) -> Result<RationalFn>,
{
    let at = |k: usize| -> Result<ExpPolyFunction> { divide_by_power(&inverse_laplace_rational(&rule(k)?)?, k) };
    let function = at(n)?;
    let mut n_independent = true;
    for k in PROBES.iter().copied().filter(|&k| k != n) {
        let other = at(k)?;
        n_independent &= function.matches(&other, 1e-30);
    }
    Ok(ResidueReport {
        n,
        probes: PROBES.to_vec(),
        n_independent,
        conjugate_closed: function.is_conjugate_closed(),
        function,
    })
}

/// `max |p|` over the poles, handy for choosing evaluation grids.
pub fn largest_pole_modulus(f: &ExpPolyFunction) -> f64 {
    f.terms.iter().map(|t| gauss_to_f64(&t.p).norm()).fold(0.0, f64::max)
}
