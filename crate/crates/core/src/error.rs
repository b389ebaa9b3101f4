use thiserror::Error;

/// Errors raised by the scattering toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScatterError {
    /// An input violated a type invariant or an operation precondition.
    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The inputs are valid individually but the formula is undefined for them.
    #[error("domain error: {0}")]
    Domain(String),

    /// First-order phase shift produced |sin δ| > 1.
    #[error("Born validity exceeded for l = {l}: sin(delta) = {sin_delta}")]
    BornValidityExceeded { l: usize, sin_delta: f64 },

    #[error(
        "quadrature did not converge: value = {value}, error estimate = {error_estimate}, \
         subdivisions = {subdivisions}"
    )]
    QuadratureNotConverged {
        value: f64,
        error_estimate: f64,
        subdivisions: usize,
    },

    #[error(
        "fixed-point iteration did not converge for l = {l}: last iterates {previous}, {last}"
    )]
    FixedPointNotConverged { l: usize, previous: f64, last: f64 },

    #[error("extrapolation sequence is not monotone: {0:?}")]
    NonMonotoneConvergence(Vec<f64>),

    #[error("l_max cap of {cap} reached with |sin(delta)| = {last_sin_delta} >= tail_tol")]
    LmaxCapReached { cap: usize, last_sin_delta: f64 },
}

pub type Result<T> = std::result::Result<T, ScatterError>;

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ScatterError::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ScatterError::InvalidParameter {
            name,
            value,
            reason: "must be non-negative and finite",
        })
    }
}
