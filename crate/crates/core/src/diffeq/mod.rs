//! Linear constant-coefficient recurrences `Σ a_k f_{n-k} = g_n`.
//!
//! The homogeneous part is solved through the image side: the recurrence at
//! `s = 1` is the image of the ODE `Σ b_k y^{(k)} = 0` with
//! `b_k = (-1)^k Q^{(k)}(1)/k!`, whose solutions `t^j e^{ρt}` have images
//! `(n+1)_j / (1-ρ)^{n+j+1}`. Constants are fitted to the initial terms
//! rather than transported from Cauchy data. Inhomogeneous data enter as the
//! convolution of the impulse response with `g`.

mod mapped;
mod surd;

pub use mapped::{verify_mapped_equation, MappedCheck, MappedReport};
pub use surd::Surd;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{gauss_real, gauss_to_f64, int, rat_to_f64, round_gauss, GaussRational};
use crate::poly::{squarefree_decomposition, Poly};
use crate::residue::upper_half_roots;

/// Working precision for numerically certified roots and everything derived
/// from them.
const WORK_BITS: u32 = 300;

/// Default horizon for residual checks.
pub const DEFAULT_N_CHECK: usize = 50;

/// Right-hand side `g_n`.
#[derive(Clone, Debug, PartialEq)]
pub enum Rhs {
    Zero,
    /// `g_0..g_N`; the solution is only defined up to `N`.
    Explicit(Vec<BigRational>),
    /// `g_n = c r^n`.
    Geometric { c: BigRational, r: BigRational },
}

impl Rhs {
    fn is_zero(&self) -> bool {
        match self {
            Rhs::Zero => true,
            Rhs::Explicit(g) => g.iter().all(Zero::is_zero),
            Rhs::Geometric { c, .. } => c.is_zero(),
        }
    }

    /// `g_0..g_{n_max}`, or fewer if the data stop earlier.
    fn terms(&self, n_max: usize) -> Vec<BigRational> {
        match self {
            Rhs::Zero => vec![BigRational::zero(); n_max + 1],
            Rhs::Explicit(g) => g.iter().take(n_max + 1).cloned().collect(),
            Rhs::Geometric { c, r } => {
                let mut out = Vec::with_capacity(n_max + 1);
                let mut v = c.clone();
                for _ in 0..=n_max {
                    out.push(v.clone());
                    v *= r;
                }
                out
            }
        }
    }

    fn horizon(&self) -> Option<usize> {
        match self {
            Rhs::Explicit(g) => g.len().checked_sub(1),
            _ => None,
        }
    }
}

/// `a_0 f_n + a_1 f_{n-1} + ... + a_p f_{n-p} = g_n` with initial terms
/// `f_0..f_{p-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceEquation {
    coeffs: Vec<BigRational>,
    rhs: Rhs,
    initial: Vec<BigRational>,
}

impl DifferenceEquation {
    pub fn new(coeffs: Vec<BigRational>, rhs: Rhs, initial: Vec<BigRational>) -> Result<Self> {
        let (Some(first), Some(last)) = (coeffs.first(), coeffs.last()) else {
            return Err(Error::InvalidEquation("no coefficients".into()));
        };
        if first.is_zero() || last.is_zero() {
            return Err(Error::InvalidEquation("a_0 and a_p must be nonzero".into()));
        }
        let p = coeffs.len() - 1;
        if initial.len() != p {
            return Err(Error::MissingInitialData { needed: p, got: initial.len() });
        }
        if let Rhs::Explicit(g) = &rhs {
            if g.is_empty() {
                return Err(Error::InvalidEquation("empty right-hand side".into()));
            }
        }
        Ok(DifferenceEquation { coeffs, rhs, initial })
    }

    pub fn homogeneous(coeffs: Vec<BigRational>, initial: Vec<BigRational>) -> Result<Self> {
        Self::new(coeffs, Rhs::Zero, initial)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn rhs(&self) -> &Rhs {
        &self.rhs
    }

    pub fn initial(&self) -> &[BigRational] {
        &self.initial
    }

    /// `f_0..f_{n_max}` by running the recurrence forward.
    pub fn forward(&self, n_max: usize) -> Vec<BigRational> {
        let g = self.rhs.terms(n_max);
        let p = self.order();
        let mut f: Vec<BigRational> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max.min(g.len().max(p) - 1) {
            if n < p {
                f.push(self.initial[n].clone());
                continue;
            }
            let mut acc = g[n].clone();
            for k in 1..=p {
                acc -= &self.coeffs[k] * &f[n - k];
            }
            f.push(acc / &self.coeffs[0]);
        }
        f
    }
}

/// `Q(s) = Σ a_k s^k`.
pub fn build_q(eq: &DifferenceEquation) -> Poly<BigRational> {
    Poly::new(eq.coeffs.clone())
}

/// Coefficients of the ODE whose image at `s = 1` is the recurrence.
#[derive(Clone, Debug, PartialEq)]
pub struct OdeSpec {
    pub b: Vec<BigRational>,
    pub q: Poly<BigRational>,
}

impl OdeSpec {
    /// `Σ b_k λ^k`, which equals `Q(1-λ)`.
    pub fn characteristic(&self) -> Poly<BigRational> {
        Poly::new(self.b.clone())
    }
}

/// `b_k = (-1)^k Q^{(k)}(1)/k!`, read off the Taylor expansion at 1.
pub fn ode_coefficients(q: &Poly<BigRational>) -> OdeSpec {
    let b = q
        .taylor_at(&BigRational::one())
        .into_iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 0 { c } else { -c })
        .collect();
    OdeSpec { b, q: q.clone() }
}

/// `Σ b_k ∇^k f_n` at `s = 1`, with `f_k = 0` for negative `k`.
pub fn apply_ode_form(b: &[BigRational], f: &[BigRational], n: usize) -> BigRational {
    let mut diffs = f[..=n].to_vec();
    let mut acc = BigRational::zero();
    for (k, bk) in b.iter().enumerate() {
        if k > 0 {
            for i in (0..diffs.len()).rev() {
                let back = if i > 0 { diffs[i - 1].clone() } else { BigRational::zero() };
                diffs[i] = &diffs[i] - back;
            }
        }
        acc += bk * &diffs[n];
    }
    acc
}

/// A root with its multiplicity. `surd` is the exact radical form for roots
/// of linear and quadratic factors.
#[derive(Clone, Debug, PartialEq)]
pub struct RootInfo {
    pub value: GaussRational,
    pub multiplicity: usize,
    pub exact: bool,
    pub surd: Option<Surd>,
}

/// All roots, conjugates included, of a rational polynomial.
pub fn roots_with_multiplicity(poly: &Poly<BigRational>) -> Result<Vec<RootInfo>> {
    let mut out = Vec::new();
    for (factor, m) in squarefree_decomposition(poly) {
        match factor.degree() {
            None | Some(0) => {}
            Some(1) => {
                let r = -factor.coeff(0) / factor.coeff(1);
                out.push(RootInfo { value: gauss_real(r.clone()), multiplicity: m, exact: true, surd: Some(Surd::rational(r)) });
            }
            Some(2) => {
                let (c0, c1, c2) = (factor.coeff(0), factor.coeff(1), factor.coeff(2));
                let disc = &c1 * &c1 - int(4) * &c2 * &c0;
                let two_c2 = int(2) * &c2;
                // built separately: a perfect-square discriminant collapses each to a rational
                let plus = Surd::new(-&c1 / &two_c2, BigRational::one() / &two_c2, &disc);
                let minus = Surd::new(-&c1 / &two_c2, -BigRational::one() / &two_c2, &disc);
                for s in [minus, plus] {
                    out.push(surd_root(s, m));
                }
            }
            Some(_) => {
                for r in upper_half_roots(&factor)? {
                    let conj = (!r.is_real()).then(|| r.value.conj());
                    out.push(RootInfo { value: r.value, multiplicity: m, exact: r.exact, surd: None });
                    if let Some(c) = conj {
                        out.push(RootInfo { value: c, multiplicity: m, exact: r.exact, surd: None });
                    }
                }
            }
        }
    }
    Ok(out)
}

fn surd_root(s: Surd, multiplicity: usize) -> RootInfo {
    let exact = s.exact_value();
    RootInfo { value: exact.clone().unwrap_or_else(|| s.approx_value()), multiplicity, exact: exact.is_some(), surd: Some(s) }
}

/// `1/(1-ρ)` for each root of `Σ b_k λ^k`. A root at `ρ = 1` has no image
/// at `s = 1`.
pub fn pipeline_bases(ode: &OdeSpec) -> Result<Vec<RootInfo>> {
    let one = BigRational::one();
    roots_with_multiplicity(&ode.characteristic())?
        .into_iter()
        .map(|r| {
            let denom = gauss_real(one.clone()) - &r.value;
            if denom.is_zero() {
                return Err(Error::DegenerateRoot);
            }
            let surd = r.surd.as_ref().map(|s| {
                // 1/(u - b√d) = (u + b√d)/(u² - b² d)
                let u = &one - &s.a;
                let norm = &u * &u - &s.b * &s.b * BigRational::from_integer(s.d.clone());
                Surd { a: &u / &norm, b: &s.b / &norm, d: s.d.clone() }
            });
            let value = match (&surd, r.exact) {
                (_, true) => gauss_real(one.clone()) / denom,
                (Some(s), false) => s.approx_value(),
                (None, false) => round_gauss(&(gauss_real(one.clone()) / denom), WORK_BITS),
            };
            Ok(RootInfo { value, multiplicity: r.multiplicity, exact: r.exact, surd })
        })
        .collect()
}

/// Roots of the recurrence's own characteristic polynomial
/// `Σ a_k x^{p-k}`.
pub fn direct_bases(eq: &DifferenceEquation) -> Result<Vec<RootInfo>> {
    let reversed: Vec<BigRational> = eq.coeffs.iter().rev().cloned().collect();
    roots_with_multiplicity(&Poly::new(reversed))
}

/// `Σ Y_{n-k} g_k`.
pub fn particular_via_convolution(y: &[BigRational], g: &[BigRational]) -> Result<Vec<BigRational>> {
    if y.len() != g.len() {
        return Err(Error::LengthMismatch { left: y.len(), right: g.len() });
    }
    Ok((0..g.len())
        .map(|n| (0..=n).fold(BigRational::zero(), |acc, k| acc + &y[n - k] * &g[k]))
        .collect())
}

/// Impulse response `Y_0..Y_{n_max}`: `Σ a_k Y_{n-k} = δ_n`, `Y_{<0} = 0`.
pub fn fundamental_solution(coeffs: &[BigRational], n_max: usize) -> Vec<BigRational> {
    let mut y: Vec<BigRational> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut acc = if n == 0 { BigRational::one() } else { BigRational::zero() };
        for k in 1..coeffs.len().min(n + 1) {
            acc -= &coeffs[k] * &y[n - k];
        }
        y.push(acc / &coeffs[0]);
    }
    y
}

/// `P(n) β^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionTerm {
    /// Coefficients of `P` in powers of `n`.
    pub poly: Vec<GaussRational>,
    pub base: GaussRational,
    pub base_surd: Option<Surd>,
    pub exact: bool,
}

impl Serialize for SolutionTerm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let base = gauss_to_f64(&self.base);
        let poly: Vec<[f64; 2]> = self.poly.iter().map(|c| {
            let c = gauss_to_f64(c);
            [c.re, c.im]
        }).collect();
        let mut st = serializer.serialize_struct("SolutionTerm", 5)?;
        st.serialize_field("poly", &poly)?;
        st.serialize_field("base_re", &base.re)?;
        st.serialize_field("base_im", &base.im)?;
        st.serialize_field("base_exact", &self.base_surd.as_ref().map(ToString::to_string))?;
        st.serialize_field("exact", &self.exact)?;
        st.end()
    }
}

/// Which root system produced the homogeneous part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveRoute {
    /// Images of the ODE solutions at `s = 1`.
    Transform,
    /// Roots of `Σ a_k x^{p-k}`; used when the transform route has a root at
    /// `ρ = 1`.
    Direct,
}

/// `f_n = Σ P_i(n) β_i^n + f^p_n`, where `f^p` is the convolution part (zero
/// for homogeneous equations).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedFormSolution {
    pub terms: Vec<SolutionTerm>,
    /// `max |Σ a_k f_{n-k} - g_n|` for `p ≤ n ≤ n_check`, together with the
    /// initial-term mismatch, each relative to the size of its terms when
    /// that exceeds 1.
    pub residual: f64,
    pub n_check: usize,
    pub route: SolveRoute,
    /// Whether the transform route hit `ρ = 1` and fell back.
    pub bypassed: bool,
    /// Largest distance between transform-route and direct bases, matched
    /// with multiplicity; `None` when the sets could not be matched.
    pub root_gap: Option<f64>,
    pub exact: bool,
    #[serde(serialize_with = "serialize_rationals")]
    pub particular: Vec<BigRational>,
}

fn serialize_rationals<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rat_to_f64))
}

impl ClosedFormSolution {
    /// `f_0..f_{n_max}` in exact or working-precision arithmetic.
    pub fn values(&self, n_max: usize) -> Vec<GaussRational> {
        let mut out = vec![Complex::new(BigRational::zero(), BigRational::zero()); n_max + 1];
        for term in &self.terms {
            let mut power = gauss_real(BigRational::one());
            for (n, slot) in out.iter_mut().enumerate() {
                let nq = gauss_real(int(n as i64));
                let p = Poly::new(term.poly.clone()).eval(&nq);
                *slot = &*slot + p * &power;
                power = &power * &term.base;
                if !term.exact {
                    power = round_gauss(&power, WORK_BITS);
                }
            }
        }
        for (slot, fp) in out.iter_mut().zip(&self.particular) {
            *slot = &*slot + gauss_real(fp.clone());
        }
        out
    }

    pub fn values_f64(&self, n_max: usize) -> Vec<f64> {
        self.values(n_max).iter().map(|z| gauss_to_f64(z).re).collect()
    }
}

/// Solves through the transform route, falling back to the direct route if
/// some `ρ = 1`.
pub fn solve(eq: &DifferenceEquation, n_check: usize) -> Result<ClosedFormSolution> {
    solve_with(eq, n_check, SolveRoute::Transform)
}

pub fn solve_with(eq: &DifferenceEquation, n_check: usize, route: SolveRoute) -> Result<ClosedFormSolution> {
    let p = eq.order();
    let n_check = eq.rhs.horizon().map_or(n_check, |h| n_check.min(h));
    let direct = direct_bases(eq)?;
    let (route, bypassed, bases) = match route {
        SolveRoute::Direct => (SolveRoute::Direct, false, direct.clone()),
        SolveRoute::Transform => match pipeline_bases(&ode_coefficients(&build_q(eq))) {
            Ok(b) => (SolveRoute::Transform, false, b),
            Err(Error::DegenerateRoot) => (SolveRoute::Direct, true, direct.clone()),
            Err(e) => return Err(e),
        },
    };
    let root_gap = match_roots(&bases, &direct);

    // particular part from the impulse response; the homogeneous part then
    // carries the corrected initial terms
    let horizon = n_check.max(p);
    let particular = if eq.rhs.is_zero() {
        Vec::new()
    } else {
        let g = eq.rhs.terms(horizon);
        let y = fundamental_solution(&eq.coeffs, g.len() - 1);
        particular_via_convolution(&y, &g)?
    };
    let targets: Vec<GaussRational> = (0..p)
        .map(|i| gauss_real(&eq.initial[i] - particular.get(i).cloned().unwrap_or_else(BigRational::zero)))
        .collect();

    // basis (i, j) at index n
    let basis = |b: &RootInfo, j: usize, n: usize| -> GaussRational {
        let power = pow_g(&b.value, n);
        match route {
            SolveRoute::Transform => {
                let rising = (1..=j).fold(BigRational::one(), |acc, l| acc * int((n + l) as i64));
                gauss_real(rising) * power * pow_g(&b.value, j + 1)
            }
            SolveRoute::Direct => gauss_real(int(n as i64).pow(j as i32)) * power,
        }
    };
    let columns: Vec<(usize, usize)> =
        bases.iter().enumerate().flat_map(|(i, b)| (0..b.multiplicity).map(move |j| (i, j))).collect();
    let matrix: Vec<Vec<GaussRational>> =
        (0..p).map(|n| columns.iter().map(|&(i, j)| basis(&bases[i], j, n)).collect()).collect();
    let constants = solve_linear(matrix, targets)?;

    let mut terms = Vec::new();
    for (i, b) in bases.iter().enumerate() {
        let mut poly = Poly::<GaussRational>::zero();
        for (&(ci, j), c) in columns.iter().zip(&constants) {
            if ci != i {
                continue;
            }
            let piece = match route {
                // (n+1)_j β^{j+1}
                SolveRoute::Transform => {
                    let rising = (1..=j).fold(Poly::one(), |acc, l| {
                        &acc * &Poly::new(vec![gauss_real(int(l as i64)), gauss_real(BigRational::one())])
                    });
                    rising.scale(&(c * pow_g(&b.value, j + 1)))
                }
                SolveRoute::Direct => Poly::monomial(c.clone(), j),
            };
            poly = &poly + &piece;
        }
        let coeffs = if b.exact { poly.coeffs().to_vec() } else { poly.coeffs().iter().map(|z| round_gauss(z, WORK_BITS)).collect() };
        terms.push(SolutionTerm { poly: coeffs, base: b.value.clone(), base_surd: b.surd.clone(), exact: b.exact });
    }

    let mut solution = ClosedFormSolution {
        exact: bases.iter().all(|b| b.exact),
        terms,
        residual: 0.0,
        n_check,
        route,
        bypassed,
        root_gap,
        particular,
    };
    solution.residual = residual(eq, &solution, n_check);
    Ok(solution)
}

fn pow_g(z: &GaussRational, k: usize) -> GaussRational {
    (0..k).fold(gauss_real(BigRational::one()), |acc, _| acc * z)
}

/// Worst of `|Σ a_k f_{n-k} - g_n|` over `p ≤ n ≤ n_check` and of the
/// initial-term mismatch, each divided by the magnitude of its terms (at
/// least 1), so fast-growing solutions are judged by relative accuracy.
fn residual(eq: &DifferenceEquation, sol: &ClosedFormSolution, n_check: usize) -> f64 {
    let p = eq.order();
    let n_max = n_check.max(p);
    let f = sol.values(n_max);
    let g = eq.rhs.terms(n_max);
    let norm = |z: &GaussRational| gauss_to_f64(z).norm();
    let mut worst: f64 = 0.0;
    for (i, init) in eq.initial.iter().enumerate() {
        let scale = rat_to_f64(init).abs().max(1.0);
        worst = worst.max(norm(&(&f[i] - gauss_real(init.clone()))) / scale);
    }
    for n in p..=n_check.min(g.len().saturating_sub(1)) {
        let mut acc = gauss_real(-g[n].clone());
        let mut scale = rat_to_f64(&g[n]).abs();
        for (k, a) in eq.coeffs.iter().enumerate() {
            let term = gauss_real(a.clone()) * &f[n - k];
            scale += norm(&term);
            acc += term;
        }
        worst = worst.max(norm(&acc) / scale.max(1.0));
    }
    worst
}

/// Greedy matching of two root multisets; returns the largest relative gap.
fn match_roots(a: &[RootInfo], b: &[RootInfo]) -> Option<f64> {
    let expand = |v: &[RootInfo]| -> Vec<Complex<f64>> {
        v.iter().flat_map(|r| std::iter::repeat_n(gauss_to_f64(&r.value), r.multiplicity)).collect()
    };
    let (xs, mut ys) = (expand(a), expand(b));
    if xs.len() != ys.len() {
        return None;
    }
    let mut worst: f64 = 0.0;
    for x in xs {
        let (idx, gap) = ys
            .iter()
            .enumerate()
            .map(|(i, y)| (i, (x - y).norm() / (1.0 + x.norm())))
            .min_by(|l, r| l.1.total_cmp(&r.1))?;
        worst = worst.max(gap);
        ys.swap_remove(idx);
    }
    Some(worst)
}

/// Gaussian elimination over Gaussian rationals.
fn solve_linear(mut m: Vec<Vec<GaussRational>>, mut rhs: Vec<GaussRational>) -> Result<Vec<GaussRational>> {
    let n = rhs.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::SingularFit);
    }
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::SingularFit)?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = gauss_real(BigRational::one()) / &m[col][col];
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] = &m[r][c] - delta;
            }
            let delta = &factor * &rhs[col];
            rhs[r] = &rhs[r] - delta;
        }
    }
    Ok((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

/// The ODE Cauchy route for Fibonacci with the constants `±1/√5` on
/// `e^{(3±√5)t/2}`, as opposed to fitting the initial terms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CauchyRouteReport {
    /// Image sequence of the Cauchy-route solution at `s = 1`.
    pub sequence: Vec<f64>,
    /// `max |y_n - F_n|`.
    pub deviation_from_fibonacci: f64,
    /// `max |y_n + F_{n+1}|`: the Cauchy route gives the shifted, negated
    /// sequence.
    pub deviation_from_negated_shift: f64,
    /// The Cauchy-route sequence still satisfies the recurrence.
    pub recurrence_residual: f64,
}

pub fn fibonacci_cauchy_route(n_max: usize) -> CauchyRouteReport {
    let sqrt5 = 5f64.sqrt();
    let rho = [(3.0 + sqrt5) / 2.0, (3.0 - sqrt5) / 2.0];
    let c = [1.0 / sqrt5, -1.0 / sqrt5];
    // image of e^{ρt} at s = 1 is (1-ρ)^{-(n+1)}
    let sequence: Vec<f64> = (0..=n_max + 1)
        .map(|n| c[0] * (1.0 - rho[0]).powi(-(n as i32) - 1) + c[1] * (1.0 - rho[1]).powi(-(n as i32) - 1))
        .collect();
    let mut fib = vec![0.0f64, 1.0];
    while fib.len() < n_max + 3 {
        let k = fib.len();
        fib.push(fib[k - 1] + fib[k - 2]);
    }
    let rel = |x: f64, y: f64| (x - y).abs() / (1.0 + y.abs());
    CauchyRouteReport {
        deviation_from_fibonacci: (0..=n_max).map(|n| rel(sequence[n], fib[n])).fold(0.0, f64::max),
        deviation_from_negated_shift: (0..=n_max).map(|n| rel(sequence[n], -fib[n + 1])).fold(0.0, f64::max),
        recurrence_residual: (2..=n_max)
            .map(|n| rel(sequence[n], sequence[n - 1] + sequence[n - 2]))
            .fold(0.0, f64::max),
        sequence: sequence[..=n_max].to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn q_and_ode_coefficients() {
        let fib = DifferenceEquation::homogeneous(ints(&[1, -1, -1]), ints(&[0, 1])).unwrap();
        let q = build_q(&fib);
        assert_eq!(q.coeffs(), ints(&[1, -1, -1]).as_slice());
        assert_eq!(ode_coefficients(&q).b, ints(&[-1, 3, -1]));
        assert_eq!(ode_coefficients(&Poly::new(ints(&[0, 1]))).b, ints(&[1, -1]));
        assert_eq!(ode_coefficients(&Poly::constant(rat(3, 4))).b, vec![rat(3, 4)]);
        let cubic = DifferenceEquation::homogeneous(ints(&[1, 0, 0, -1]), ints(&[0, 0, 0])).unwrap();
        assert_eq!(build_q(&cubic).coeffs(), ints(&[1, 0, 0, -1]).as_slice());
    }

    #[test]
    fn invalid_equations() {
        assert!(matches!(DifferenceEquation::homogeneous(ints(&[0, 1]), ints(&[1])), Err(Error::InvalidEquation(_))));
        assert!(matches!(DifferenceEquation::homogeneous(ints(&[1, 0]), ints(&[1])), Err(Error::InvalidEquation(_))));
        assert_eq!(
            DifferenceEquation::homogeneous(ints(&[1, -1, -1]), ints(&[0])),
            Err(Error::MissingInitialData { needed: 2, got: 1 })
        );
    }

    #[test]
    fn ode_form_matches_recurrence() {
        let a = vec![rat(2, 3), int(-1), rat(5, 7), int(4)];
        let b = ode_coefficients(&Poly::new(a.clone())).b;
        let f: Vec<BigRational> = (0..12).map(|k| rat(k * k - 3, k + 1)).collect();
        for n in 3..12 {
            let direct = (0..=3).fold(BigRational::zero(), |acc, k| acc + &a[k] * &f[n - k]);
            assert_eq!(apply_ode_form(&b, &f, n), direct);
        }
    }

    #[test]
    fn binet_formula() {
        let fib = DifferenceEquation::homogeneous(ints(&[1, -1, -1]), ints(&[0, 1])).unwrap();
        let sol = solve(&fib, 30).unwrap();
        assert_eq!(sol.route, SolveRoute::Transform);
        assert!(!sol.bypassed);
        assert!(sol.residual < 1e-60, "residual {}", sol.residual);
        assert!(sol.root_gap.unwrap() < 1e-15);
        let exact = fib.forward(30);
        for (v, e) in sol.values(30).iter().zip(&exact) {
            let d = gauss_to_f64(&(v - gauss_real(e.clone()))).norm();
            assert!(d < 1e-50);
        }
        let shown: Vec<String> = sol.terms.iter().map(|t| t.base_surd.as_ref().unwrap().to_string()).collect();
        assert!(shown.contains(&"1/2 + (1/2)√5".to_string()));
        assert!(shown.contains(&"1/2 - (1/2)√5".to_string()));
        // both constants ±1/√5
        for t in &sol.terms {
            assert_eq!(t.poly.len(), 1);
            assert!((gauss_to_f64(&t.poly[0]).re.abs() - 1.0 / 5f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn simple_closed_forms() {
        let doubling = DifferenceEquation::homogeneous(ints(&[1, -2]), ints(&[1])).unwrap();
        let sol = solve(&doubling, 20).unwrap();
        assert!(sol.exact);
        assert_eq!(sol.residual, 0.0);
        assert_eq!(sol.terms[0].base, gauss_real(int(2)));
        assert_eq!(sol.terms[0].poly, vec![gauss_real(int(1))]);

        let constant = DifferenceEquation::homogeneous(ints(&[1, -1]), vec![rat(7, 3)]).unwrap();
        let sol = solve(&constant, 10).unwrap();
        assert!(sol.values(10).iter().all(|v| *v == gauss_real(rat(7, 3))));
    }

    #[test]
    fn repeated_and_complex_roots() {
        // (x - 2)^2 (x^2 + 1): f_n = 4f_{n-1} - 5f_{n-2} + 4f_{n-3} - 4f_{n-4}
        let eq = DifferenceEquation::homogeneous(ints(&[1, -4, 5, -4, 4]), ints(&[1, 0, 2, -3])).unwrap();
        for route in [SolveRoute::Transform, SolveRoute::Direct] {
            let sol = solve_with(&eq, 50, route).unwrap();
            assert!(sol.exact);
            assert_eq!(sol.residual, 0.0, "{route:?}");
            let exact = eq.forward(50);
            for (v, e) in sol.values(50).iter().zip(&exact) {
                assert_eq!(*v, gauss_real(e.clone()));
            }
        }
    }

    #[test]
    fn irreducible_cubic_is_certified() {
        // x^3 - x - 1
        let eq = DifferenceEquation::homogeneous(ints(&[1, 0, -1, -1]), ints(&[1, 1, 1])).unwrap();
        let sol = solve(&eq, 50).unwrap();
        assert!(!sol.exact);
        assert!(sol.residual < 1e-40);
        assert!(sol.root_gap.unwrap() < 1e-15);
        let f = sol.values_f64(50);
        let exact = eq.forward(50);
        for n in 0..=50 {
            assert!((f[n] - rat_to_f64(&exact[n])).abs() <= 1e-12 * rat_to_f64(&exact[n]).abs().max(1.0));
        }
    }

    #[test]
    fn convolution_basics() {
        let delta = {
            let mut d = vec![BigRational::zero(); 5];
            d[0] = int(1);
            d
        };
        let g = ints(&[3, -1, 4, 1, 5]);
        assert_eq!(particular_via_convolution(&delta, &g).unwrap(), g);
        let ones = ints(&[1; 6]);
        assert_eq!(particular_via_convolution(&ones, &ones).unwrap(), ints(&[1, 2, 3, 4, 5, 6]));
        assert_eq!(
            particular_via_convolution(&ones, &g),
            Err(Error::LengthMismatch { left: 6, right: 5 })
        );
    }

    #[test]
    fn fundamental_solution_drives_forced_doubling() {
        let a = ints(&[1, -2]);
        let y = fundamental_solution(&a, 20);
        assert_eq!(y[5], int(32));
        let f = particular_via_convolution(&y, &ints(&[1; 21])).unwrap();
        let mut brute = vec![int(1)];
        for n in 1..=20 {
            brute.push(int(2) * &brute[n - 1] + int(1));
        }
        assert_eq!(f, brute);
    }

    #[test]
    fn inhomogeneous_solutions() {
        let eq = DifferenceEquation::new(ints(&[1, -1, -1]), Rhs::Geometric { c: int(1), r: rat(1, 2) }, ints(&[2, -1])).unwrap();
        let sol = solve(&eq, 40).unwrap();
        assert!(sol.residual < 1e-40);
        let exact = eq.forward(40);
        for (v, e) in sol.values_f64(40).iter().zip(&exact) {
            assert!((v - rat_to_f64(e)).abs() <= 1e-12 * rat_to_f64(e).abs().max(1.0));
        }
        let explicit = DifferenceEquation::new(ints(&[2, 1]), Rhs::Explicit(ints(&[1, 0, 3, 0, -2])), ints(&[5])).unwrap();
        let sol = solve(&explicit, 50).unwrap();
        assert_eq!(sol.n_check, 4);
        assert_eq!(sol.residual, 0.0);
    }

    #[test]
    fn cauchy_route_is_shifted_and_negated() {
        let report = fibonacci_cauchy_route(30);
        assert!(report.deviation_from_negated_shift < 1e-12);
        assert!(report.deviation_from_fibonacci > 0.1);
        assert!(report.recurrence_residual < 1e-12);
    }

    #[test]
    fn json_shape() {
        let eq = DifferenceEquation::homogeneous(ints(&[1, -2]), ints(&[3])).unwrap();
        let v = serde_json::to_value(solve(&eq, 5).unwrap()).unwrap();
        assert_eq!(v["terms"][0]["base_re"], 2.0);
        assert_eq!(v["terms"][0]["poly"][0][0], 3.0);
        assert_eq!(v["residual"], 0.0);
    }
}
