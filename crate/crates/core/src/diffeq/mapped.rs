//! Checks of three worked equations mapped to the image side.
//!
//! Case 4: `∫₀^x (x-t)^β f(t) dt = x^λ`. Case 5: a pair of coupled Volterra
//! equations. Case 6: an integro-differential equation with an exponential
//! kernel. Each check compares the stated image-side equation and stated
//! solution images against independent oracles (the power-row image and
//! quadrature), so misprints show up as large discrepancies rather than
//! being silently corrected.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::nabla::{derivative_image, nabla_power};
use crate::special::{gamma, ln_gamma};
use crate::transform::{forward_transform, SourceFunction};

/// One comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MappedCheck {
    pub name: String,
    pub description: String,
    pub max_discrepancy: f64,
    pub tolerance: f64,
    pub holds: bool,
    /// Required checks decide `passed`; the others document how the stated
    /// forms compare.
    pub required: bool,
}

impl MappedCheck {
    fn new(name: &str, description: &str, max_discrepancy: f64, tolerance: f64, required: bool) -> Self {
        MappedCheck {
            name: name.into(),
            description: description.into(),
            max_discrepancy,
            tolerance,
            holds: max_discrepancy <= tolerance,
            required,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MappedReport {
    pub case: u32,
    pub equation: String,
    pub checks: Vec<MappedCheck>,
    pub notes: Vec<String>,
    pub passed: bool,
}

impl MappedReport {
    pub fn check(&self, name: &str) -> Option<&MappedCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Runs the checks for case `4`, `5` or `6`.
pub fn verify_mapped_equation(case: u32) -> Result<MappedReport> {
    let (equation, checks, notes) = match case {
        4 => case_integral_equation()?,
        5 => case_system()?,
        6 => case_integro_differential()?,
        other => return Err(Error::UnknownCase(other.to_string())),
    };
    let passed = checks.iter().filter(|c| c.required).all(|c| c.holds);
    Ok(MappedReport { case, equation: equation.into(), checks, notes, passed })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn factorial(n: usize) -> f64 {
    gamma(n as f64 + 1.0)
}

type Checks = (&'static str, Vec<MappedCheck>, Vec<String>);

/// Image of `f = Γ(λ+1)/(Γ(β+1)Γ(λ-β)) x^{λ-β-1}` from the power row.
fn power_row_solution(lambda: f64, beta: f64, n: usize, s: f64) -> f64 {
    let c = gamma(lambda + 1.0) / (gamma(beta + 1.0) * gamma(lambda - beta));
    let a = lambda - beta - 1.0;
    // Γ(n+a+1)/(n! s^{n+a+1}) in log space
    c * (ln_gamma(n as f64 + a + 1.0) - ln_gamma(n as f64 + 1.0) - (n as f64 + a + 1.0) * s.ln()).exp()
}

/// The solution image as stated, read with `n` as its index.
fn stated_solution(lambda: f64, beta: f64, n: usize, s: f64) -> f64 {
    gamma(lambda + 1.0) * gamma(n as f64 + lambda - beta + 2.0)
        / (factorial(n) * gamma(beta + 1.0) * gamma(lambda - beta))
        * s.powf(n as f64 + lambda - beta - 1.0)
}

/// `Σ_k Γ(n-k+β+1) s^{k-β} φ_k` against `Γ(n+λ+1) s^{-λ}`: the stated form,
/// which omits the `1/(n-k)!` and `1/n!` of the convolution and kernel images.
fn stated_equation(phi: &[f64], lambda: f64, beta: f64, n: usize, s: f64) -> f64 {
    let lhs: f64 = (0..=n).map(|k| gamma((n - k) as f64 + beta + 1.0) * s.powf(k as f64 - beta) * phi[k]).sum();
    rel(lhs, gamma(n as f64 + lambda + 1.0) * s.powf(-lambda))
}

/// `Σ_k Γ(n-k+β+1)/(n-k)! s^{k-β} φ_k = Γ(n+λ+1)/(n! s^λ)`.
fn corrected_equation(phi: &[f64], lambda: f64, beta: f64, n: usize, s: f64) -> f64 {
    let lhs: f64 = (0..=n)
        .map(|k| gamma((n - k) as f64 + beta + 1.0) / factorial(n - k) * s.powf(k as f64 - beta) * phi[k])
        .sum();
    rel(lhs, gamma(n as f64 + lambda + 1.0) / factorial(n) * s.powf(-lambda))
}

fn case_integral_equation() -> Result<Checks> {
    const N: usize = 8;
    let lambdas = [0.5, 1.0, 2.0, 2.5, 3.25];
    let betas = [-0.5, 0.0, 0.5, 1.0];
    let abscissae = [0.5, 1.0, 2.0, 3.5];
    let (mut stated_stated, mut stated_oracle, mut corrected_oracle, mut image_gap) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &lambda in &lambdas {
        for &beta in betas.iter().filter(|&&b| lambda - b > 0.0) {
            for &s in &abscissae {
                let oracle: Vec<f64> = (0..=N).map(|n| power_row_solution(lambda, beta, n, s)).collect();
                let stated: Vec<f64> = (0..=N).map(|n| stated_solution(lambda, beta, n, s)).collect();
                for n in 0..=N {
                    stated_stated = stated_stated.max(stated_equation(&stated, lambda, beta, n, s));
                    stated_oracle = stated_oracle.max(stated_equation(&oracle, lambda, beta, n, s));
                    corrected_oracle = corrected_oracle.max(corrected_equation(&oracle, lambda, beta, n, s));
                    image_gap = image_gap.max(rel(stated[n], oracle[n]));
                }
            }
        }
    }

    // λ = 2, β = 0: f = 2x
    let f = SourceFunction::power(1.0);
    let mut quad_gap: f64 = 0.0;
    for s in [1.0, 2.0] {
        let phi = forward_transform(&f, s, N, 1e-13)?;
        for n in 0..=N {
            quad_gap = quad_gap.max(rel(2.0 * phi.values[n], power_row_solution(2.0, 0.0, n, s)));
        }
    }

    let checks = vec![
        MappedCheck::new(
            "corrected-equation-power-row-image",
            "convolution-form equation with 1/(n-k)! and 1/n! restored, fed the power-row image of the solution",
            corrected_oracle,
            1e-12,
            true,
        ),
        MappedCheck::new(
            "quadrature-vs-power-row",
            "quadrature image of f = 2x (λ = 2, β = 0) against the power row",
            quad_gap,
            1e-10,
            true,
        ),
        MappedCheck::new(
            "stated-equation-stated-image",
            "stated image-side equation fed the stated solution image",
            stated_stated,
            1e-9,
            false,
        ),
        MappedCheck::new(
            "stated-equation-power-row-image",
            "stated image-side equation fed the power-row image",
            stated_oracle,
            1e-9,
            false,
        ),
        MappedCheck::new(
            "stated-image-vs-power-row",
            "stated solution image against the power-row image",
            image_gap,
            1e-9,
            false,
        ),
    ];
    let notes = vec![
        "the solution f(x) = Γ(λ+1)/(Γ(β+1)Γ(λ-β)) x^{λ-β-1} is correct".into(),
        "its image is Γ(λ+1)Γ(n+λ-β)/(Γ(β+1)Γ(λ-β) n! s^{n+λ-β}); the stated image has Γ(n+λ-β+2) and s^{n+λ-β-1} instead".into(),
        "the image-side equation needs Γ(n-k+β+1)/(n-k)! on the left and Γ(n+λ+1)/n! on the right".into(),
    ];
    Ok(("∫₀^x (x-t)^β f(t) dt = x^λ", checks, notes))
}

/// Stated images for the coupled system, `(φ_n, ψ_n)`.
fn system_stated(n: usize, s: f64) -> (f64, f64) {
    let n1 = n as f64 + 1.0;
    let phi = (s + 1.0).powf(-n1) - n1 * (s + 1.0).powf(-n1 - 1.0);
    let psi = 8.0 / 9.0 * (s - 2.0).powf(-n1) + n1 / 3.0 * (s + 1.0).powf(-n1 - 1.0) - 8.0 / 9.0 * (s + 1.0).powf(-n1);
    (phi, psi)
}

/// Residuals of both image-side equations at index `n`.
fn system_residual(phi: &[f64], psi: &[f64], n: usize, s: f64) -> f64 {
    let lag = |k: usize, base: f64, extra: i32| base.powi(-((n - k) as i32) - 1 - extra);
    let mut first = s.powi(-(n as i32) - 1);
    let mut second = 4.0 * (n as f64 + 1.0) * s.powi(-(n as i32) - 2);
    for k in 0..=n {
        first += -2.0 * phi[k] * lag(k, s - 2.0, 0) + psi[k] * lag(k, s, 0);
        second += -phi[k] * lag(k, s, 0) + 4.0 * (n - k + 1) as f64 * psi[k] * lag(k, s, 1);
    }
    (phi[n] - first).abs().max((psi[n] - second).abs())
}

fn case_system() -> Result<Checks> {
    const N: usize = 10;
    let mut stated_residual: f64 = 0.0;
    for s in [3.0, 4.0, 6.0] {
        let (phi, psi): (Vec<f64>, Vec<f64>) = (0..=N).map(|n| system_stated(n, s)).unzip();
        for n in 0..=N {
            stated_residual = stated_residual.max(system_residual(&phi, &psi, n, s));
        }
    }

    let s = 4.0;
    let f1 = SourceFunction::linear_combination(vec![(1.0, SourceFunction::exp(-1.0)), (-1.0, SourceFunction::power_exp(1.0, 1.0))]);
    let f2 = SourceFunction::linear_combination(vec![
        (8.0 / 9.0, SourceFunction::exp(2.0)),
        (1.0 / 3.0, SourceFunction::power_exp(1.0, 1.0)),
        (-8.0 / 9.0, SourceFunction::exp(-1.0)),
    ]);
    let phi = forward_transform(&f1, s, N, 1e-13)?.values;
    let psi = forward_transform(&f2, s, N, 1e-13)?.values;
    let mut quad_residual: f64 = 0.0;
    let mut image_gap: f64 = 0.0;
    for n in 0..=N {
        quad_residual = quad_residual.max(system_residual(&phi, &psi, n, s));
        let (a, b) = system_stated(n, s);
        image_gap = image_gap.max((phi[n] - a).abs()).max((psi[n] - b).abs());
    }

    let checks = vec![
        MappedCheck::new(
            "stated-images-satisfy-system",
            "stated φ_n, ψ_n substituted into the image-side system, s ∈ {3, 4, 6}, n ≤ 10",
            stated_residual,
            1e-9,
            true,
        ),
        MappedCheck::new(
            "quadrature-images-satisfy-system",
            "quadrature images of the stated f_1, f_2 substituted into the system, s = 4, n ≤ 10",
            quad_residual,
            1e-8,
            true,
        ),
        MappedCheck::new(
            "stated-images-vs-quadrature",
            "stated φ_n, ψ_n against quadrature images of f_1, f_2, s = 4",
            image_gap,
            1e-10,
            true,
        ),
    ];
    let notes = vec!["the stated solution and its images are consistent with the image-side system".into()];
    Ok(("coupled Volterra system with kernels e^{2(t-τ)}, 1 and (t-τ)", checks, notes))
}

fn integro_stated(n: usize, s: f64) -> f64 {
    let n1 = n as f64 + 1.0;
    n1 * (s - 1.0).powf(-n1 - 1.0) - (s - 1.0).powf(-n1) + s.powf(-n1)
}

/// `|∇²φ_n + Σ_k ∇φ_k/(s-2)^{n-k+1} - 1/(s-2)^{n+1}|` with `f(0) = f'(0) = 0`.
fn integro_residual(phi: &[f64], n: usize, s: f64) -> Result<f64> {
    let init = [0.0, 0.0];
    let second = if n >= 2 { nabla_power(phi, 2, &s, n)? } else { derivative_image(phi, 2, &s, n, &init)? };
    let mut lhs = second;
    for k in 0..=n {
        lhs += derivative_image(phi, 1, &s, k, &init)? * (s - 2.0).powi(-((n - k) as i32) - 1);
    }
    Ok((lhs - (s - 2.0).powi(-(n as i32) - 1)).abs())
}

fn case_integro_differential() -> Result<Checks> {
    const N: usize = 10;
    let mut stated_residual: f64 = 0.0;
    for s in [3.0, 4.0, 5.0] {
        let phi: Vec<f64> = (0..=N).map(|n| integro_stated(n, s)).collect();
        for n in 0..=N {
            stated_residual = stated_residual.max(integro_residual(&phi, n, s)?);
        }
    }
    let s = 3.0;
    let f = SourceFunction::linear_combination(vec![
        (1.0, SourceFunction::power_exp(1.0, -1.0)),
        (-1.0, SourceFunction::exp(1.0)),
        (1.0, SourceFunction::constant(1.0)),
    ]);
    let phi = forward_transform(&f, s, N, 1e-13)?.values;
    let image_gap = (0..=N).map(|n| (phi[n] - integro_stated(n, s)).abs()).fold(0.0, f64::max);
    let mut quad_residual: f64 = 0.0;
    for n in 0..=N {
        quad_residual = quad_residual.max(integro_residual(&phi, n, s)?);
    }

    let checks = vec![
        MappedCheck::new(
            "stated-image-satisfies-equation",
            "stated φ_n substituted into the image-side equation, s ∈ {3, 4, 5}, 0 ≤ n ≤ 10",
            stated_residual,
            1e-10,
            true,
        ),
        MappedCheck::new(
            "quadrature-image-satisfies-equation",
            "quadrature image of f = te^t - e^t + 1 substituted into the equation, s = 3",
            quad_residual,
            1e-8,
            true,
        ),
        MappedCheck::new(
            "stated-image-vs-quadrature",
            "stated φ_n against the quadrature image of te^t - e^t + 1, s = 3",
            image_gap,
            1e-10,
            true,
        ),
    ];
    let notes = vec![
        "the e^t-based solution is consistent with the e^{2(t-τ)} kernel: the Laplace image is 1/(s(s-1)^2)".into(),
        "with f(0) = f'(0) = 0 the equation holds for every n ≥ 0, not only n ≥ 2".into(),
    ];
    Ok(("f'' + ∫₀^t e^{2(t-τ)} f'(τ) dτ = e^{2t}, f(0) = f'(0) = 0", checks, notes))
}
