//! Crate-wide error type.

use std::fmt;

/// Errors produced by the signal-analysis operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The input has fewer samples than the operation requires.
    InsufficientSamples { required: usize, actual: usize },
    /// A parameter failed validation (window sizes, config fields, knots, ...).
    InvalidParameter(String),
    /// The signal has fewer than two interior extrema and cannot be filtered.
    Trend,
    /// No sign change was found after smoothing.
    NoOscillation,
    /// An envelope touched or crossed zero during AM normalization.
    DegenerateEnvelope,
    /// Normalized signal exceeded unit magnitude beyond tolerance.
    NormalizationFailed { max_abs: f64 },
    /// Step-halving check failed for the ODE integrator.
    DtTooCoarse { relative_change: f64 },
    /// A norm that must be positive was zero.
    ZeroNorm(&'static str),
    /// Evaluation outside a spline's knot range.
    OutOfRange { x: f64, lo: f64, hi: f64 },
    /// Fixture or estimator name not recognized by the benchmark harness.
    Unknown(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InsufficientSamples { required, actual } => {
                write!(f, "insufficient samples: need {required}, got {actual}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Trend => write!(f, "signal is a trend"),
            Error::NoOscillation => write!(f, "no oscillation detected"),
            Error::DegenerateEnvelope => write!(f, "degenerate envelope"),
            Error::NormalizationFailed { max_abs } => {
                write!(f, "normalization failed: max |y| = {max_abs}")
            }
            Error::DtTooCoarse { relative_change } => {
                write!(f, "dt too coarse: step-halving changed endpoint by {relative_change:e}")
            }
            Error::ZeroNorm(what) => write!(f, "zero norm: {what}"),
            Error::OutOfRange { x, lo, hi } => {
                write!(f, "query {x} outside [{lo}, {hi}]")
            }
            Error::Unknown(name) => write!(f, "unknown fixture or method: {name}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
