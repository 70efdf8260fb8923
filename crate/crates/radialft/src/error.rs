use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An improper integral or limit showed no sign of converging.
    #[error("divergence detected: {0}")]
    Divergence(String),

    /// Adaptive refinement hit its depth limit before reaching tolerance.
    #[error("tolerance not met: requested {requested:e}, achieved {achieved:e}")]
    ToleranceNotMet { requested: f64, achieved: f64 },

    /// Series acceleration stalled above the requested tolerance.
    #[error("acceleration failed to converge: residual {residual:e}")]
    AccelerationStalled { residual: f64 },

    /// A numeric calibration did not satisfy its self-consistency checks.
    #[error("calibration failed: {0}")]
    Calibration(String),

    /// The profile violates a hypothesis required by the requested operation.
    #[error("condition violation: {0}")]
    ConditionViolation(String),

    /// A profile or grid specification could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Numeric differentiation noise exceeded the trustworthy threshold.
    #[error("precision warning: {0}")]
    Precision(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
