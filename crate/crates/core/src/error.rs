use thiserror::Error;

/// Failure while evaluating a map at a point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("sqrt of negative value {0}")]
    SqrtDomain(f64),
    #[error("log of non-positive value {0}")]
    LogDomain(f64),
    #[error("power {base}^{exponent} outside its real domain")]
    PowDomain { base: f64, exponent: f64 },
    #[error("derivative order {requested} exceeds declared smoothness {declared}")]
    OrderExceeded { requested: usize, declared: usize },
    #[error("non-finite value at t = {0}")]
    NonFinite(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at byte {offset}: expected {expected}, found {found}")]
    Syntax {
        offset: usize,
        expected: String,
        found: String,
    },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("exponent at byte {offset} must be constant when the base depends on t")]
    NonConstantExponent { offset: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("singular point at t = {0}")]
    Singular(f64),
    #[error("inflection point at t = {0}")]
    Inflection(f64),
    #[error("parameter change is not monotone near u = {0}")]
    NotMonotone(f64),
    #[error("degenerate jacobian along the curve at t = {0}")]
    DegenerateJacobian(f64),
    #[error("no smooth α with β = αℓ: {reason} at t = {t}")]
    AlphaUnresolved { t: f64, reason: String },
    #[error("dependency witness unavailable: {0}")]
    WitnessUnavailable(String),
    #[error("dependency witness invalid: {0}")]
    WitnessInvalid(String),
    #[error("quadrature did not reach tolerance {tol} on [{a}, {b}]")]
    Quadrature { a: f64, b: f64, tol: f64 },
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("validation failed: {0}")]
    Validation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
