//! The self-verification battery: one check per acceptance criterion.
//!
//! Each criterion returns a [`CriterionOutcome`] with its worst measured
//! discrepancy, so a failure names the check and the size of the miss. The
//! quick profile shrinks ranges; the full profile runs the stated ones. A
//! [`Fault`] can be injected to confirm that the battery notices breakage.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diffeq::{self, apply_ode_form, ode_coefficients, DifferenceEquation};
use crate::error::{Error, Result};
use crate::exact::{gauss_real, int, rat, rat_to_f64};
use crate::identities::{self, Identity};
use crate::laguerre::{self, CoefficientSeq};
use crate::nabla::{self, FractionalOrder};
use crate::poly::Poly;
use crate::quadrature::{integrate_half_line, HalfLine, QuadOptions};
use crate::residue::{self, ExpPolyFunction, ExpTerm, RationalFn};
use crate::special::{self, BernoulliVariant};
use crate::transform::{self, ClosedImage, ImageRule, ImageSeq, SourceFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    Quick,
    Full,
}

/// Deliberate breakage for checking that the battery can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Scales the exponential row of the image table by `1 + 1e-6`.
    TableCoefficient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub profile: Profile,
    pub fault: Option<Fault>,
}

impl SuiteConfig {
    pub fn full() -> Self {
        SuiteConfig { profile: Profile::Full, fault: None }
    }

    pub fn quick() -> Self {
        SuiteConfig { profile: Profile::Quick, fault: None }
    }

    fn full_range(&self) -> bool {
        self.profile == Profile::Full
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    /// Worst measured discrepancy of the binding check.
    pub metric: f64,
    pub tolerance: f64,
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub profile: Profile,
    pub fault: Option<Fault>,
    pub criteria: Vec<CriterionOutcome>,
    pub all_passed: bool,
}

pub const CRITERIA: [(u8, &str, f64); 11] = [
    (1, "image table vs quadrature", 30.0),
    (2, "derivative, integration and convolution rules", 20.0),
    (3, "Laguerre round trip", 60.0),
    (4, "residue inverse", 10.0),
    (5, "backward-difference calculus", 20.0),
    (6, "fractional derivative images", 10.0),
    (7, "Binet reproduction", 5.0),
    (8, "recurrence / ODE-form equivalence", 10.0),
    (9, "worked mapped equations", 30.0),
    (10, "Hurwitz zeta", 30.0),
    (11, "identity sweeps", 120.0),
];

/// What a criterion measured.
struct Measured {
    passed: bool,
    metric: f64,
    tolerance: f64,
    detail: String,
}

impl Measured {
    fn within(metric: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Measured { passed: metric <= tolerance, metric, tolerance, detail: detail.into() }
    }
}

pub fn run_criterion(id: u8, config: &SuiteConfig) -> Result<CriterionOutcome> {
    let (_, name, budget) = *CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| Error::UnknownCase(format!("criterion {id}")))?;
    let start = Instant::now();
    let measured = match id {
        1 => image_table(config),
        2 => operator_rules(config),
        3 => laguerre_round_trip(config),
        4 => residue_inverse(config),
        5 => nabla_calculus(config),
        6 => fractional(config),
        7 => binet(config),
        8 => equivalence(config),
        9 => mapped(config),
        10 => hurwitz(config),
        _ => identity_sweeps(config),
    };
    let measured = measured.unwrap_or_else(|e| Measured {
        passed: false,
        metric: f64::INFINITY,
        tolerance: 0.0,
        detail: format!("error: {e}"),
    });
    Ok(CriterionOutcome {
        id,
        name: name.into(),
        passed: measured.passed,
        metric: measured.metric,
        tolerance: measured.tolerance,
        detail: measured.detail,
        seconds: start.elapsed().as_secs_f64(),
        budget_seconds: budget,
    })
}

pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let criteria: Vec<CriterionOutcome> =
        CRITERIA.iter().map(|c| run_criterion(c.0, config).expect("listed criterion")).collect();
    SuiteReport {
        profile: config.profile,
        fault: config.fault,
        all_passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}

fn rel_err(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs().max(f64::MIN_POSITIVE)
}

/// The nine table rows with parameters, and their convergence abscissae.
pub fn table_rows() -> Vec<(&'static str, ImageRule)> {
    vec![
        ("exp", ImageRule::Exp { a: 1.5 }),
        ("exp-shift", ImageRule::ExpShift { a: 1.0, base: Box::new(ImageRule::Cos { a: 2.0 }) }),
        ("power", ImageRule::Power { a: 0.5 }),
        ("power-exp", ImageRule::PowerExp { a: 1.5, b: 0.5 }),
        ("sin", ImageRule::Sin { a: 2.0 }),
        ("cos", ImageRule::Cos { a: 2.0 }),
        ("delay", ImageRule::Delay { a: 1.0, base: Box::new(ImageRule::Exp { a: 0.5 }) }),
        ("log", ImageRule::Log),
        (
            "composite",
            ImageRule::Composite { terms: vec![(2.0, ImageRule::Exp { a: -1.0 }), (-0.5, ImageRule::Sin { a: 1.0 })] },
        ),
    ]
}

/// Quadrature images of `f` with each entry's error held below `1e-11` of
/// its magnitude scale, the image of `|f|`. The scale equals `|φ_n|` for
/// sign-definite sources and stays meaningful where an oscillating source's
/// image cancels to zero.
struct Scaled {
    seq: ImageSeq,
    scale: Vec<f64>,
}

impl Scaled {
    fn gap(&self, n: usize, reference: f64) -> f64 {
        (self.seq.values[n] - reference).abs() / self.scale[n].max(reference.abs())
    }
}

fn quadrature_images(f: &SourceFunction, s: f64, n_max: usize) -> Result<Scaled> {
    let g = f.clone();
    let mut magnitude = SourceFunction::new("|f|", move |t| g.eval(t).abs())
        .with_exp_order(f.exp_order)
        .with_origin_exponent(f.origin_exponent)
        .with_breakpoints(f.breakpoints.clone());
    magnitude.bound = f.bound;
    let loose = QuadOptions { abs_tol: 1e-300, rel_tol: 1e-6, max_abs_error: f64::INFINITY, max_panels: 800 };
    let scale = transform::forward_transform_with(&magnitude, s, n_max, &loose)?.values;
    let mut values = Vec::with_capacity(n_max + 1);
    let mut errors = Vec::with_capacity(n_max + 1);
    for (n, &m) in scale.iter().enumerate() {
        let opts = QuadOptions { abs_tol: 1e-300, rel_tol: 1e-13, max_abs_error: 1e-11 * m, max_panels: 800 };
        let r = transform::transform_order(f, s, n as f64 + 1.0, &opts)?;
        if r.abs_error > opts.max_abs_error || !r.value.is_finite() {
            return Err(Error::QuadratureFailure { requested: opts.max_abs_error, achieved: r.abs_error });
        }
        values.push(r.value);
        errors.push(r.abs_error);
    }
    Ok(Scaled { seq: ImageSeq::new(s, values, errors), scale })
}

fn image_table(config: &SuiteConfig) -> Result<Measured> {
    let (n_max, offsets): (usize, &[f64]) =
        if config.full_range() { (20, &[0.5, 1.0, 2.0, 3.5, 5.0]) } else { (10, &[0.5, 2.0, 5.0]) };
    let mut worst: f64 = 0.0;
    let mut worst_at = String::new();
    for (name, rule) in table_rows() {
        let image = ClosedImage::new(rule)?;
        let f = image.source_function();
        for &offset in offsets {
            let s = image.abscissa() + offset;
            let quad = quadrature_images(&f, s, n_max)?;
            for n in 0..=n_max {
                let mut closed = image.eval(n, s);
                if name == "exp" && config.fault == Some(Fault::TableCoefficient) {
                    closed *= 1.0 + 1e-6;
                }
                let e = quad.gap(n, closed);
                if e > worst {
                    worst = e;
                    worst_at = format!("{name} row, n = {n}, s = {s}");
                }
            }
        }
    }
    Ok(Measured::within(
        worst,
        1e-8,
        format!("9 rows, n ≤ {n_max}, {} abscissae; relative to max(|φ_n|, image of |f|); worst at {worst_at}", offsets.len()),
    ))
}

/// Worst gap of `a` against the quadrature reference `b`.
fn lemma_gap(a: &ImageSeq, b: &Scaled) -> f64 {
    a.values.iter().enumerate().map(|(n, &x)| b.gap(n, x)).fold(0.0, f64::max)
}

fn operator_rules(config: &SuiteConfig) -> Result<Measured> {
    const TOL: f64 = 1e-7;
    let n_max = if config.full_range() { 20 } else { 10 };
    let abscissae: &[f64] = if config.full_range() { &[1.5, 2.0, 3.0, 4.0, 6.0] } else { &[2.0, 4.0] };
    let mut worst: f64 = 0.0;

    // derivatives of the ordinary Laplace transform
    let factorial = |n: usize| special::gamma(n as f64 + 1.0);
    type Derivs = Box<dyn Fn(usize, f64) -> f64>;
    let laplace_cases: Vec<(SourceFunction, Derivs)> = vec![
        (SourceFunction::exp(0.5), Box::new(move |n, s| (-1f64).powi(n as i32) * factorial(n) / (s - 0.5).powi(n as i32 + 1))),
        (
            SourceFunction::sin(1.0),
            // 1/(s²+1) = Im 1/(s-i)
            Box::new(move |n, s| {
                let z = Complex::new(s, -1.0).powi(-(n as i32) - 1);
                (-1f64).powi(n as i32) * factorial(n) * z.im
            }),
        ),
        (SourceFunction::constant(1.0), Box::new(move |n, s| (-1f64).powi(n as i32) * factorial(n) / s.powi(n as i32 + 1))),
    ];
    for (f, derivs) in &laplace_cases {
        for &s in abscissae {
            let from_laplace = transform::image_from_laplace(|n| Some(derivs(n, s)), s, n_max)?;
            let quad = quadrature_images(f, s, n_max)?;
            worst = worst.max(lemma_gap(&from_laplace, &quad));
        }
    }

    // running integrals
    let integral_cases = [
        (SourceFunction::constant(1.0), SourceFunction::power(1.0)),
        (
            SourceFunction::exp(-1.0),
            SourceFunction::linear_combination(vec![(1.0, SourceFunction::constant(1.0)), (-1.0, SourceFunction::exp(-1.0))]),
        ),
        (SourceFunction::cos(1.0), SourceFunction::sin(1.0)),
    ];
    for (f, g) in &integral_cases {
        for &s in abscissae {
            let lhs = transform::integrate_image(&quadrature_images(f, s, n_max)?.seq)?;
            let rhs = quadrature_images(g, s, n_max)?;
            worst = worst.max(lemma_gap(&lhs, &rhs));
        }
    }

    // convolutions over {1, t, e^{-t}}, with f*g worked out by hand
    let one = || SourceFunction::constant(1.0);
    let t = || SourceFunction::power(1.0);
    let e = || SourceFunction::exp(-1.0);
    let combo = SourceFunction::linear_combination;
    let conv_cases = [
        (one(), one(), t()),
        (one(), t(), combo(vec![(0.5, SourceFunction::power(2.0))])),
        (one(), e(), combo(vec![(1.0, one()), (-1.0, e())])),
        (t(), t(), combo(vec![(1.0 / 6.0, SourceFunction::power(3.0))])),
        (t(), e(), combo(vec![(1.0, t()), (-1.0, one()), (1.0, e())])),
        (e(), e(), SourceFunction::power_exp(1.0, 1.0)),
    ];
    for (f, g, fg) in &conv_cases {
        for &s in abscissae {
            let lhs = transform::convolve_images(
                &quadrature_images(f, s, n_max)?.seq,
                &quadrature_images(g, s, n_max)?.seq,
            )?;
            let rhs = quadrature_images(fg, s, n_max)?;
            worst = worst.max(lemma_gap(&lhs, &rhs));
        }
    }
    Ok(Measured::within(
        worst,
        TOL,
        format!("Laplace-derivative, running-integral and convolution rules vs quadrature over 12 cases, n ≤ {n_max}"),
    ))
}

fn random_rational(rng: &mut ChaCha8Rng, span: i64, max_den: i64) -> BigRational {
    rat(rng.random_range(-span..=span), rng.random_range(1..=max_den))
}

fn nonzero_rational(rng: &mut ChaCha8Rng, span: i64, max_den: i64) -> BigRational {
    loop {
        let q = random_rational(rng, span, max_den);
        if !q.is_zero() {
            return q;
        }
    }
}

fn laguerre_round_trip(config: &SuiteConfig) -> Result<Measured> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let trials = if config.full_range() { 40 } else { 10 };
    let mut involution_ok = true;
    for _ in 0..trials {
        let len = rng.random_range(1..=13);
        let s = loop {
            let q = random_rational(&mut rng, 9, 4);
            if q > BigRational::zero() {
                break q;
            }
        };
        let phi: Vec<BigRational> = (0..len).map(|_| random_rational(&mut rng, 50, 7)).collect();
        let d = laguerre::differences_exact(&s, &phi);
        involution_ok &= laguerre::image_from_differences_exact(&s, &d) == phi;
        involution_ok &= laguerre::differences_exact(&s, &laguerre::image_from_differences_exact(&s, &phi)) == phi;
    }

    // Gram matrix of L*_k under e^{-sx}
    let mut gram_gap: f64 = 0.0;
    for s in [1.0, 2.5] {
        for j in 0..=8 {
            for k in 0..=j {
                let shape = HalfLine { origin_exponent: 0.0, scale: 16.0 / s, decay: s, breakpoints: Vec::new() };
                let r = integrate_half_line(
                    |x| (-s * x).exp() * laguerre::laguerre_star_eval(j, x, s).unwrap_or(f64::NAN) * laguerre::laguerre_star_eval(k, x, s).unwrap_or(f64::NAN),
                    &shape,
                    &QuadOptions::default(),
                );
                let target = if j == k { 1.0 } else { 0.0 };
                gram_gap = gram_gap.max((r.value - target).abs());
            }
        }
    }

    // e^{-x} at s = 1 has image 1/2^{n+1}; coefficients through the exact bridge
    let n_top = if config.full_range() { 24 } else { 12 };
    let phi: Vec<BigRational> = (0..=n_top).map(|n| rat(1, 1i64 << (n + 1))).collect();
    let a: Vec<f64> = laguerre::differences_exact(&int(1), &phi).iter().map(rat_to_f64).collect();
    let f = SourceFunction::exp(-1.0);
    let residuals: Vec<f64> = (0..=n_top)
        .map(|n| laguerre::weighted_l2_residual(&f, &CoefficientSeq { s: 1.0, a: a[..=n].to_vec() }))
        .collect::<Result<_>>()?;
    // allow quadrature noise once the residual reaches the double-precision floor
    let monotone = residuals.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-15);
    let final_residual = *residuals.last().expect("nonempty");
    let target = if config.full_range() { 1e-3 } else { 1e-2 };

    let passed = involution_ok && gram_gap <= 1e-8 && monotone && final_residual <= target;
    Ok(Measured {
        passed,
        metric: gram_gap,
        tolerance: 1e-8,
        detail: format!(
            "exact involution on {trials} rational sequences: {involution_ok}; Gram gap {gram_gap:.2e}; \
             residual nonincreasing: {monotone}; residual at N = {n_top}: {final_residual:.2e} (target {target:.0e})"
        ),
    })
}

fn residue_inverse(config: &SuiteConfig) -> Result<Measured> {
    let mut failures = Vec::new();
    for a in [-1i64, 0, 2] {
        let image = ClosedImage::exp(a as f64)?;
        let expected = ExpPolyFunction::canonical(vec![ExpTerm { c: gauss_real(int(1)), p: gauss_real(int(a)), m: 1, exact: true }]);
        for n in 0..=3 {
            let report = residue::residue_inverse(|k| RationalFn::from_closed_image(&image, k), n)?;
            if report.function != expected || !report.n_independent {
                failures.push(format!("e^({a}t) at n = {n}"));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let trials = if config.full_range() { 60 } else { 15 };
    for trial in 0..trials {
        let count = rng.random_range(1..=3);
        let mut terms = Vec::new();
        let mut poles: Vec<BigRational> = Vec::new();
        while poles.len() < count {
            let p = random_rational(&mut rng, 12, 4);
            if !poles.contains(&p) {
                poles.push(p);
            }
        }
        for p in poles {
            for m in 1..=rng.random_range(1..=2) {
                terms.push(ExpTerm { c: gauss_real(nonzero_rational(&mut rng, 9, 5)), p: gauss_real(p.clone()), m, exact: true });
            }
        }
        let f = ExpPolyFunction::canonical(terms);
        let back = residue::inverse_laplace_rational(&f.laplace()?)?;
        if back != f {
            failures.push(format!("random trial {trial}"));
        }
    }
    let passed = failures.is_empty();
    Ok(Measured {
        passed,
        metric: failures.len() as f64,
        tolerance: 0.0,
        detail: if passed {
            format!("12 exponential probes and {trials} random round trips exact")
        } else {
            format!("mismatches: {}", failures.join(", "))
        },
    })
}

/// `f`, its derivatives `f^{(p)}` for `p ≤ 3`, and `f^{(j)}(0)`.
fn derivative_cases() -> Vec<(&'static str, SourceFunction, Vec<SourceFunction>, Vec<f64>)> {
    let sin_d = |p: i32| {
        let scale = 2f64.powi(p);
        let phase = p as f64 * PI / 2.0;
        SourceFunction::new(format!("d^{p} sin 2t"), move |t: f64| scale * (2.0 * t + phase).sin()).with_bound(scale)
    };
    let cos_d = |p: i32| {
        let phase = p as f64 * PI / 2.0;
        SourceFunction::new(format!("d^{p} cos t"), move |t: f64| (t + phase).cos()).with_bound(1.0)
    };
    let combo = SourceFunction::linear_combination;
    vec![
        (
            "exp(t/2)",
            SourceFunction::exp(0.5),
            (1..=3).map(|p| combo(vec![(0.5f64.powi(p), SourceFunction::exp(0.5))])).collect(),
            vec![1.0, 0.5, 0.25],
        ),
        ("sin 2t", sin_d(0), (1..=3).map(sin_d).collect(), vec![0.0, 2.0, 0.0]),
        ("cos t", cos_d(0), (1..=3).map(cos_d).collect(), vec![1.0, 0.0, -1.0]),
        (
            "t^3",
            SourceFunction::power(3.0),
            vec![
                combo(vec![(3.0, SourceFunction::power(2.0))]),
                combo(vec![(6.0, SourceFunction::power(1.0))]),
                SourceFunction::constant(6.0),
            ],
            vec![0.0, 0.0, 0.0],
        ),
    ]
}

fn nabla_calculus(config: &SuiteConfig) -> Result<Measured> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let trials = if config.full_range() { 20 } else { 5 };
    let mut exact_ok = true;
    for _ in 0..trials {
        let s = nonzero_rational(&mut rng, 9, 4);
        let phi: Vec<BigRational> = (0..=10).map(|_| random_rational(&mut rng, 30, 6)).collect();
        for p in 0..=10 {
            let iterated = nabla::nabla_iterated(&phi, p, &s);
            for n in p..=10 {
                exact_ok &= nabla::nabla_power(&phi, p, &s, n)? == iterated[n];
                exact_ok &= nabla::unshift_via_nabla(&phi, p, &s, n)? == phi[n - p];
            }
        }
    }

    let n_max = if config.full_range() { 8 } else { 4 };
    let abscissae: &[f64] = if config.full_range() { &[2.5, 4.0] } else { &[2.5] };
    let mut worst: f64 = 0.0;
    for (_, f, derivs, init) in derivative_cases() {
        for &s in abscissae {
            let phi = quadrature_images(&f, s, n_max)?.seq.values;
            for (p, fp) in derivs.iter().enumerate().map(|(i, d)| (i + 1, d)) {
                let target = quadrature_images(fp, s, n_max)?;
                for n in 0..=n_max {
                    let v = nabla::derivative_image(&phi, p, &s, n, &init)?;
                    worst = worst.max(target.gap(n, v));
                }
            }
        }
    }
    let passed = exact_ok && worst <= 1e-6;
    Ok(Measured {
        passed,
        metric: worst,
        tolerance: 1e-6,
        detail: format!("expansion and reconstruction exact on {trials} rational sequences: {exact_ok}; derivative images vs quadrature worst {worst:.2e}"),
    })
}

fn fractional(config: &SuiteConfig) -> Result<Measured> {
    let n_max = if config.full_range() { 6 } else { 3 };
    let mut worst: f64 = 0.0;
    for k in [1.0, 2.0] {
        for s in [1.0, 2.0] {
            let phi = quadrature_images(&SourceFunction::power(k), s, n_max)?.seq.values;
            for alpha in [0.25, 0.5, 0.75] {
                let order = FractionalOrder::new(alpha)?;
                for n in 0..=n_max {
                    let v = nabla::fractional_image(&phi, order, s, n)?;
                    // D^α t^k = Γ(k+1)/Γ(k+1-α) t^{k-α}, then the power row
                    let e = k - alpha;
                    let oracle = special::gamma(k + 1.0) / special::gamma(e + 1.0)
                        * (special::ln_gamma(n as f64 + e + 1.0) - special::ln_gamma(n as f64 + 1.0) - (n as f64 + e + 1.0) * s.ln()).exp();
                    worst = worst.max(rel_err(v, oracle));
                }
            }
        }
    }
    Ok(Measured::within(worst, 1e-6, format!("f ∈ {{t, t²}}, α ∈ {{1/4, 1/2, 3/4}}, s ∈ {{1, 2}}, n ≤ {n_max}")))
}

fn binet(_config: &SuiteConfig) -> Result<Measured> {
    let eq = DifferenceEquation::homogeneous(vec![int(1), int(-1), int(-1)], vec![int(0), int(1)])?;
    let sol = diffeq::solve(&eq, 30)?;
    let values = sol.values_f64(30);
    let sqrt5 = 5f64.sqrt();
    let (phi, psi) = ((1.0 + sqrt5) / 2.0, (1.0 - sqrt5) / 2.0);
    // the f64 Binet oracle is itself only good to about 1e-15 relative
    let termwise = (0..=30)
        .map(|n| {
            let binet = (phi.powi(n) - psi.powi(n)) / sqrt5;
            (values[n as usize] - binet).abs() / binet.abs().max(1.0)
        })
        .fold(0.0, f64::max);
    let gap = sol.root_gap.unwrap_or(f64::INFINITY);
    let passed = sol.residual <= 1e-10 && termwise <= 1e-10 && gap <= 1e-10;
    Ok(Measured {
        passed,
        metric: termwise,
        tolerance: 1e-10,
        detail: format!(
            "recurrence residual {:.2e}, termwise relative gap to (φⁿ-ψⁿ)/√5 {termwise:.2e}, pipeline vs direct roots {gap:.2e}",
            sol.residual
        ),
    })
}

fn equivalence(config: &SuiteConfig) -> Result<Measured> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let trials = if config.full_range() { 1000 } else { 100 };
    let mut failures = 0usize;
    for _ in 0..trials {
        let p = rng.random_range(1..=4);
        let mut a: Vec<BigRational> = (0..=p).map(|_| random_rational(&mut rng, 9, 5)).collect();
        a[0] = nonzero_rational(&mut rng, 9, 5);
        a[p] = nonzero_rational(&mut rng, 9, 5);
        let b = ode_coefficients(&Poly::new(a.clone())).b;
        let f: Vec<BigRational> = (0..=12).map(|_| random_rational(&mut rng, 20, 6)).collect();
        for n in p..=12 {
            let direct = (0..=p).fold(BigRational::zero(), |acc, k| acc + &a[k] * &f[n - k]);
            if apply_ode_form(&b, &f, n) != direct {
                failures += 1;
            }
        }
    }
    Ok(Measured {
        passed: failures == 0,
        metric: failures as f64,
        tolerance: 0.0,
        detail: format!("{trials} random rational instances, p ≤ 4, p ≤ n ≤ 12; {failures} mismatches"),
    })
}

fn mapped(_config: &SuiteConfig) -> Result<Measured> {
    let reports: Vec<diffeq::MappedReport> = [4, 5, 6].into_iter().map(diffeq::verify_mapped_equation).collect::<Result<_>>()?;
    let system = &reports[1];
    let stated = system.check("stated-images-satisfy-system").map_or(f64::INFINITY, |c| c.max_discrepancy);
    let quad = system.check("quadrature-images-satisfy-system").map_or(f64::INFINITY, |c| c.max_discrepancy);
    let system_ok = stated <= 1e-9 && system.passed;
    let others_ok = reports[0].passed && reports[2].passed;
    Ok(Measured {
        passed: system_ok && others_ok,
        metric: stated,
        tolerance: 1e-9,
        detail: format!(
            "coupled system: stated residual {stated:.2e}, quadrature residual {quad:.2e}; integral-equation corrections hold: {}; integro-differential holds: {}",
            reports[0].passed, reports[2].passed
        ),
    })
}

fn hurwitz(config: &SuiteConfig) -> Result<Measured> {
    let (ss, aa): (&[f64], &[f64]) =
        if config.full_range() { (&[1.5, 2.0, 3.0, 5.0], &[0.25, 0.5, 1.0]) } else { (&[2.0, 3.0], &[0.5, 1.0]) };
    let mut grid_gap: f64 = 0.0;
    for &s in ss {
        for &a in aa {
            let integral = special::hurwitz_integral(s, a)?.value;
            let em = special::hurwitz_em(s, a)?.value;
            grid_gap = grid_gap.max((integral - em).abs());
        }
    }
    let zeta2 = (special::hurwitz_integral(2.0, 1.0)?.value - PI * PI / 6.0).abs();
    let mut bernoulli_gap: f64 = 0.0;
    for k in 1..=8usize {
        for a in [rat(1, 2), BigRational::one()] {
            let zeta = special::hurwitz_em(1.0 - k as f64, rat_to_f64(&a))?.value;
            let expected = -rat_to_f64(&special::bernoulli_poly(k, &a)) / k as f64;
            bernoulli_gap = bernoulli_gap.max((zeta - expected).abs());
        }
    }
    let report = special::hurwitz_bernoulli_representation(3.0, 1.0, 12, BernoulliVariant::KMinusOneFactorial)?;
    let passed = grid_gap <= 1e-8 && zeta2 <= 1e-10 && bernoulli_gap <= 1e-9 && !report.partial_sums.is_empty();
    Ok(Measured {
        passed,
        metric: grid_gap,
        tolerance: 1e-8,
        detail: format!(
            "integral vs Euler–Maclaurin {grid_gap:.2e}; ζ(2,1) - π²/6 = {zeta2:.2e}; ζ(1-k,a) + B_k(a)/k worst {bernoulli_gap:.2e}; \
             Bernoulli series at s = 3, a = 1: {} partial sums, smallest term at k = {}, discrepancy there {:.2e}",
            report.partial_sums.len(),
            report.min_term_index,
            report.discrepancy_at_min_term
        ),
    })
}

fn identity_sweeps(config: &SuiteConfig) -> Result<Measured> {
    let mut failed = Vec::new();
    let mut checked = 0;
    for id in Identity::ALL {
        let range = if config.full_range() { id.default_range() } else { id.default_range().min(20) };
        let report = identities::sweep(id, range);
        checked += report.checked;
        if !report.all_passed {
            failed.push(format!("{:?} ({} counterexamples)", id, report.counterexamples.len()));
        }
    }
    Ok(Measured {
        passed: failed.is_empty(),
        metric: failed.len() as f64,
        tolerance: 0.0,
        detail: if failed.is_empty() { format!("{checked} exact instances, all equal") } else { failed.join(", ") },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let report = run_suite(&SuiteConfig::quick());
        for c in &report.criteria {
            assert!(c.passed, "criterion {} failed: {}", c.id, c.detail);
        }
    }

    #[test]
    fn injected_fault_is_caught() {
        let config = SuiteConfig { profile: Profile::Quick, fault: Some(Fault::TableCoefficient) };
        let outcome = run_criterion(1, &config).unwrap();
        assert!(!outcome.passed);
        assert!(outcome.detail.contains("exp row"));
        assert!(run_criterion(12, &config).is_err());
    }
}
