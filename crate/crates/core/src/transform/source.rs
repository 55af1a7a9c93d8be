use std::fmt;
use std::sync::Arc;

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function on `(0, ∞)` with the growth metadata the transform needs:
/// `|f(t)| ≤ M e^{rt}` and `f(t) ~ c t^a` as `t → 0+`.
#[derive(Clone)]
pub struct SourceFunction {
    eval: Eval,
    /// Exponential order `r`; the transform converges for `s > r`.
    pub exp_order: f64,
    /// Constant `M` of the growth bound, when known.
    pub bound: Option<f64>,
    /// Origin exponent `a > -1`.
    pub origin_exponent: f64,
    pub label: String,
    /// Points of non-smoothness, passed on to the quadrature.
    pub breakpoints: Vec<f64>,
}

impl fmt::Debug for SourceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SourceFunction")
            .field("label", &self.label)
            .field("exp_order", &self.exp_order)
            .field("bound", &self.bound)
            .field("origin_exponent", &self.origin_exponent)
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

impl SourceFunction {
    /// A bounded, regular function (`r = 0`, `a = 0`); adjust with the
    /// `with_*` builders.
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        SourceFunction {
            eval: Arc::new(f),
            exp_order: 0.0,
            bound: None,
            origin_exponent: 0.0,
            label: label.into(),
            breakpoints: Vec::new(),
        }
    }

    pub fn with_exp_order(mut self, r: f64) -> Self {
        self.exp_order = r;
        self
    }

    pub fn with_bound(mut self, m: f64) -> Self {
        self.bound = Some(m);
        self
    }

    pub fn with_origin_exponent(mut self, a: f64) -> Self {
        self.origin_exponent = a;
        self
    }

    pub fn with_breakpoints(mut self, points: Vec<f64>) -> Self {
        self.breakpoints = points;
        self
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn constant(c: f64) -> Self {
        SourceFunction::new(format!("{c}"), move |_| c).with_bound(c.abs())
    }

    /// `e^{at}`
    pub fn exp(a: f64) -> Self {
        SourceFunction::new(format!("exp({a}t)"), move |t: f64| (a * t).exp())
            .with_exp_order(a)
            .with_bound(1.0)
    }

    /// `t^a`, `a > -1`
    pub fn power(a: f64) -> Self {
        // t^a ≤ (a/(eε))^a e^{εt}; any positive order works, zero is the infimum
        SourceFunction::new(format!("t^{a}"), move |t: f64| t.powf(a))
            .with_origin_exponent(a.min(0.0))
    }

    /// `t^a e^{-bt}`
    pub fn power_exp(a: f64, b: f64) -> Self {
        SourceFunction::new(format!("t^{a} exp(-{b}t)"), move |t: f64| t.powf(a) * (-b * t).exp())
            .with_exp_order(-b)
            .with_origin_exponent(a.min(0.0))
    }

    /// `sin(at)`
    pub fn sin(a: f64) -> Self {
        SourceFunction::new(format!("sin({a}t)"), move |t: f64| (a * t).sin()).with_bound(1.0)
    }

    /// `cos(at)`
    pub fn cos(a: f64) -> Self {
        SourceFunction::new(format!("cos({a}t)"), move |t: f64| (a * t).cos()).with_bound(1.0)
    }

    /// `ln t`; the logarithmic origin singularity is treated as a small
    /// negative power.
    pub fn log() -> Self {
        SourceFunction::new("ln t", |t: f64| t.ln()).with_origin_exponent(-0.25)
    }

    /// `1/(1 - e^{-t})`, whose generalized-order image is the Hurwitz zeta function.
    pub fn one_over_one_minus_exp_neg() -> Self {
        SourceFunction::new("1/(1-exp(-t))", |t: f64| -1.0 / (-t).exp_m1())
            .with_origin_exponent(-1.0)
    }

    /// `e^{at} f(t)`
    pub fn exp_shift(&self, a: f64) -> Self {
        let inner = self.eval.clone();
        SourceFunction {
            eval: Arc::new(move |t: f64| (a * t).exp() * inner(t)),
            exp_order: self.exp_order + a,
            bound: self.bound,
            origin_exponent: self.origin_exponent,
            label: format!("exp({a}t)*({})", self.label),
            breakpoints: self.breakpoints.clone(),
        }
    }

    /// `f(t - a)` for `t > a`, zero before.
    pub fn delay(&self, a: f64) -> Self {
        let inner = self.eval.clone();
        let mut breakpoints: Vec<f64> = self.breakpoints.iter().map(|b| b + a).collect();
        breakpoints.push(a);
        SourceFunction {
            eval: Arc::new(move |t: f64| if t > a { inner(t - a) } else { 0.0 }),
            exp_order: self.exp_order,
            bound: self.bound.map(|m| m * (-self.exp_order * a).exp().max(1.0)),
            origin_exponent: 0.0,
            label: format!("({})(t-{a})", self.label),
            breakpoints,
        }
    }

    /// `Σ c_i f_i(t)`
    pub fn linear_combination(terms: Vec<(f64, SourceFunction)>) -> Self {
        let exp_order = terms.iter().map(|(_, f)| f.exp_order).fold(f64::NEG_INFINITY, f64::max);
        let origin_exponent = terms.iter().map(|(_, f)| f.origin_exponent).fold(0.0, f64::min);
        let mut breakpoints: Vec<f64> = terms.iter().flat_map(|(_, f)| f.breakpoints.clone()).collect();
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        let label = terms
            .iter()
            .map(|(c, f)| format!("{c}*({})", f.label))
            .collect::<Vec<_>>()
            .join(" + ");
        let parts: Vec<(f64, Eval)> = terms.iter().map(|(c, f)| (*c, f.eval.clone())).collect();
        SourceFunction {
            eval: Arc::new(move |t: f64| parts.iter().map(|(c, g)| c * g(t)).sum()),
            exp_order: if exp_order.is_finite() { exp_order } else { 0.0 },
            bound: None,
            origin_exponent,
            label,
            breakpoints,
        }
    }
}
