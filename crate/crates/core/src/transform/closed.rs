//! Closed-form images of elementary functions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{harmonic, ln_gamma, EULER_GAMMA};

use super::SourceFunction;

/// One row of the table of elementary images.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum ImageRule {
    /// `e^{at}` ↦ `1/(s-a)^{n+1}`
    Exp { a: f64 },
    /// `e^{at} f(t)` ↦ `φ_n(s-a)`
    ExpShift { a: f64, base: Box<ImageRule> },
    /// `t^a` ↦ `Γ(a+n+1) / (s^{n+a+1} Γ(n+1))`
    Power { a: f64 },
    /// `t^a e^{-bt}` ↦ `Γ(a+n+1) / ((s+b)^{n+a+1} Γ(n+1))`
    PowerExp { a: f64, b: f64 },
    /// `sin(at)` ↦ `sin((n+1) arctan(a/s)) / (s²+a²)^{(n+1)/2}`
    Sin { a: f64 },
    /// `cos(at)` ↦ `cos((n+1) arctan(a/s)) / (s²+a²)^{(n+1)/2}`
    Cos { a: f64 },
    /// `f(t-a)`, zero for `t < a` ↦ `e^{-as} Σ_k a^{n-k}/(n-k)! φ_k(s)`
    Delay { a: f64, base: Box<ImageRule> },
    /// `ln t` ↦ `(H_n - γ - ln s) / s^{n+1}`
    Log,
    /// `Σ c_i f_i` ↦ `Σ c_i φ_{i,n}`
    Composite { terms: Vec<(f64, ImageRule)> },
}

/// A validated [`ImageRule`], evaluable at any `(n, s)` above its
/// convergence abscissa.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedImage {
    #[serde(flatten)]
    rule: ImageRule,
}

impl ImageRule {
    fn validate(&self) -> Result<()> {
        let finite = |x: f64, name: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("{name} = {x} is not finite")))
            }
        };
        match self {
            ImageRule::Exp { a } | ImageRule::Sin { a } | ImageRule::Cos { a } => finite(*a, "a"),
            ImageRule::ExpShift { a, base } => {
                finite(*a, "a")?;
                base.validate()
            }
            ImageRule::Power { a } => power_exponent(*a),
            ImageRule::PowerExp { a, b } => {
                power_exponent(*a)?;
                finite(*b, "b")
            }
            ImageRule::Delay { a, base } => {
                if !(*a > 0.0) || !a.is_finite() {
                    return Err(Error::NonPositiveDelay(*a));
                }
                base.validate()
            }
            ImageRule::Log => Ok(()),
            ImageRule::Composite { terms } => {
                if terms.is_empty() {
                    return Err(Error::InvalidParams("composite rule needs at least one term".into()));
                }
                for (c, r) in terms {
                    finite(*c, "coefficient")?;
                    r.validate()?;
                }
                Ok(())
            }
        }
    }

    fn abscissa(&self) -> f64 {
        match self {
            ImageRule::Exp { a } => *a,
            ImageRule::ExpShift { a, base } => base.abscissa() + a,
            ImageRule::Power { .. } | ImageRule::Sin { .. } | ImageRule::Cos { .. } | ImageRule::Log => 0.0,
            ImageRule::PowerExp { b, .. } => -b,
            ImageRule::Delay { base, .. } => base.abscissa(),
            ImageRule::Composite { terms } => {
                terms.iter().map(|(_, r)| r.abscissa()).fold(f64::NEG_INFINITY, f64::max)
            }
        }
    }

    fn eval(&self, n: usize, s: f64) -> f64 {
        let nf = n as f64;
        match self {
            ImageRule::Exp { a } => (s - a).powf(-(nf + 1.0)),
            ImageRule::ExpShift { a, base } => base.eval(n, s - a),
            ImageRule::Power { a } => power_image(*a, n, s),
            ImageRule::PowerExp { a, b } => power_image(*a, n, s + b),
            ImageRule::Sin { a } => {
                let theta = a.atan2(s);
                ((nf + 1.0) * theta).sin() * (s * s + a * a).powf(-(nf + 1.0) / 2.0)
            }
            ImageRule::Cos { a } => {
                let theta = a.atan2(s);
                ((nf + 1.0) * theta).cos() * (s * s + a * a).powf(-(nf + 1.0) / 2.0)
            }
            ImageRule::Delay { a, base } => {
                let mut weight = 1.0; // a^j / j!
                let mut acc = 0.0;
                for j in 0..=n {
                    if j > 0 {
                        weight *= a / j as f64;
                    }
                    acc += weight * base.eval(n - j, s);
                }
                (-a * s).exp() * acc
            }
            ImageRule::Log => (harmonic(n) - EULER_GAMMA - s.ln()) * s.powf(-(nf + 1.0)),
            ImageRule::Composite { terms } => terms.iter().map(|(c, r)| c * r.eval(n, s)).sum(),
        }
    }

    fn source(&self) -> SourceFunction {
        match self {
            ImageRule::Exp { a } => SourceFunction::exp(*a),
            ImageRule::ExpShift { a, base } => base.source().exp_shift(*a),
            ImageRule::Power { a } => SourceFunction::power(*a),
            ImageRule::PowerExp { a, b } => SourceFunction::power_exp(*a, *b),
            ImageRule::Sin { a } => SourceFunction::sin(*a),
            ImageRule::Cos { a } => SourceFunction::cos(*a),
            ImageRule::Delay { a, base } => base.source().delay(*a),
            ImageRule::Log => SourceFunction::log(),
            ImageRule::Composite { terms } => {
                SourceFunction::linear_combination(terms.iter().map(|(c, r)| (*c, r.source())).collect())
            }
        }
    }
}

fn power_exponent(a: f64) -> Result<()> {
    if a > -1.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("power exponent a = {a} must exceed -1")))
    }
}

fn power_image(a: f64, n: usize, s: f64) -> f64 {
    let nf = n as f64;
    (ln_gamma(a + nf + 1.0) - ln_gamma(nf + 1.0) - (nf + a + 1.0) * s.ln()).exp()
}

impl ClosedImage {
    pub fn new(rule: ImageRule) -> Result<Self> {
        rule.validate()?;
        Ok(ClosedImage { rule })
    }

    pub fn rule(&self) -> &ImageRule {
        &self.rule
    }

    /// Convergence abscissa: the image exists for `s` strictly above it.
    pub fn abscissa(&self) -> f64 {
        self.rule.abscissa()
    }

    pub fn check_abscissa(&self, s: f64) -> Result<()> {
        let abscissa = self.abscissa();
        if s > abscissa {
            Ok(())
        } else {
            Err(Error::AbscissaTooSmall { s, abscissa })
        }
    }

    /// `φ_n(s)`; meaningful only above [`abscissa`](Self::abscissa).
    pub fn eval(&self, n: usize, s: f64) -> f64 {
        self.rule.eval(n, s)
    }

    /// The function whose image this is.
    pub fn source_function(&self) -> SourceFunction {
        self.rule.source()
    }

    /// Image of `e^{at} f(t)`.
    pub fn shifted(&self, a: f64) -> Result<Self> {
        ClosedImage::new(ImageRule::ExpShift { a, base: Box::new(self.rule.clone()) })
    }

    /// Image of `f(t-a)`.
    pub fn delayed(&self, a: f64) -> Result<Self> {
        ClosedImage::new(ImageRule::Delay { a, base: Box::new(self.rule.clone()) })
    }

    pub fn exp(a: f64) -> Result<Self> {
        ClosedImage::new(ImageRule::Exp { a })
    }
    pub fn power(a: f64) -> Result<Self> {
        ClosedImage::new(ImageRule::Power { a })
    }
    pub fn power_exp(a: f64, b: f64) -> Result<Self> {
        ClosedImage::new(ImageRule::PowerExp { a, b })
    }
    pub fn sin(a: f64) -> Result<Self> {
        ClosedImage::new(ImageRule::Sin { a })
    }
    pub fn cos(a: f64) -> Result<Self> {
        ClosedImage::new(ImageRule::Cos { a })
    }
    pub fn log() -> Self {
        ClosedImage { rule: ImageRule::Log }
    }
    pub fn composite(terms: Vec<(f64, ImageRule)>) -> Result<Self> {
        ClosedImage::new(ImageRule::Composite { terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_rule_example() {
        assert!((ClosedImage::power(1.0).unwrap().eval(2, 1.0) - 3.0).abs() < 1e-13);
        assert!(matches!(ClosedImage::power(-1.0), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn exp_zero_is_inverse_power() {
        let img = ClosedImage::exp(0.0).unwrap();
        for n in 0..10 {
            assert!((img.eval(n, 1.7) - 1.7f64.powi(-(n as i32 + 1))).abs() < 1e-15);
        }
    }

    #[test]
    fn log_rule_at_one() {
        assert!((ClosedImage::log().eval(1, 1.0) - (1.0 - EULER_GAMMA)).abs() < 1e-15);
    }

    #[test]
    fn shifted_cosine_and_power() {
        let b = 2.0;
        let img = ClosedImage::cos(b).unwrap().shifted(1.0).unwrap();
        let (s, n) = (3.5, 4);
        let theta = (b / (s - 1.0)).atan();
        let expected = ((n as f64 + 1.0) * theta).cos() / ((s - 1.0).powi(2) + b * b).powf((n as f64 + 1.0) / 2.0);
        assert!((img.eval(n, s) - expected).abs() < 1e-15);
        assert_eq!(img.abscissa(), 1.0);

        let te = ClosedImage::power(1.0).unwrap().shifted(-1.0).unwrap();
        for n in 0..8 {
            let expected = (n as f64 + 1.0) / 2.5f64.powi(n as i32 + 2);
            assert!((te.eval(n, 1.5) - expected).abs() < 1e-14);
        }
        let identity = ClosedImage::sin(1.0).unwrap().shifted(0.0).unwrap();
        assert_eq!(identity.eval(3, 2.0), ClosedImage::sin(1.0).unwrap().eval(3, 2.0));
    }

    #[test]
    fn delay_requires_positive_shift() {
        assert!(matches!(ClosedImage::exp(0.0).unwrap().delayed(0.0), Err(Error::NonPositiveDelay(_))));
        let d = ClosedImage::exp(1.0).unwrap().delayed(1.0).unwrap();
        // e^{-2}(φ_1 + φ_0) with φ_k = 1
        assert!((d.eval(1, 2.0) - 2.0 * (-2.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn abscissa_checks() {
        let img = ClosedImage::power_exp(0.5, 2.0).unwrap();
        assert_eq!(img.abscissa(), -2.0);
        assert!(img.check_abscissa(-1.5).is_ok());
        assert!(matches!(img.check_abscissa(-2.0), Err(Error::AbscissaTooSmall { .. })));
    }
}
