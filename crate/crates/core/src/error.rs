use thiserror::Error;

/// Errors raised by the transform, inversion and solver routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("abscissa s = {s} does not exceed the convergence abscissa {abscissa}")]
    AbscissaTooSmall { s: f64, abscissa: f64 },
    #[error("quadrature stopped at estimated error {achieved:e}, requested {requested:e}")]
    QuadratureFailure { requested: f64, achieved: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("delay must be positive, got {0}")]
    NonPositiveDelay(f64),
    #[error("image sequences sampled at different abscissae ({left} vs {right})")]
    AbscissaMismatch { left: f64, right: f64 },
    #[error("derivative of order {0} is unavailable")]
    DerivativeUnavailable(usize),
    #[error("scale s must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("sequence too short: need {needed} entries, got {got}")]
    InsufficientLength { needed: usize, got: usize },
    #[error("rational function is not proper (numerator degree {num} >= denominator degree {den})")]
    ImproperRational { num: usize, den: usize },
    #[error("root isolation failed: {0}")]
    RootIsolationFailure(String),
    #[error("term with t-power {power} cannot be divided by t^{n}")]
    NonCancellingPower { n: usize, power: usize },
    #[error("index {n} is below the operator power {p}")]
    IndexUnderflow { n: usize, p: usize },
    #[error("initial data: need {needed} values, got {got}")]
    MissingInitialData { needed: usize, got: usize },
    #[error("fractional order {0} outside [0, 1)")]
    OrderOutOfRange(f64),
    #[error("characteristic root equals 1")]
    DegenerateRoot,
    #[error("initial-condition system is singular")]
    SingularFit,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("argument must be positive, got {0}")]
    NonPositiveArgument(f64),
    #[error("series diverges for s = {0}")]
    DivergentSeries(f64),
    #[error("abscissa must be nonzero")]
    ZeroAbscissa,
    #[error("index ({n}, {j}) out of range")]
    IndexOutOfRange { n: i64, j: i64 },
    #[error("invalid difference equation: {0}")]
    InvalidEquation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
