use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value for `{field}`: {reason}")]
    Domain { field: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric (max asymmetry {max_asymmetry:e})")]
    Asymmetry { max_asymmetry: f64 },

    #[error("Cholesky factorization failed after jitter escalation to {max_jitter:e}")]
    CholeskyFailure { max_jitter: f64 },

    #[error("no observations supplied")]
    EmptyObservations,

    #[error("cannot place {count} observations at least {min_gap} steps apart in {n} grid points: {reason}")]
    InfeasibleSparsity {
        count: usize,
        min_gap: usize,
        n: usize,
        reason: String,
    },

    #[error("series too short: need more than {needed} values, have {len}")]
    SeriesTooShort { needed: usize, len: usize },

    #[error("differencing state mismatch: {0}")]
    StateMismatch(String),

    #[error("Toeplitz autocovariance system is singular (lag-0 autocovariance {gamma0:e})")]
    SingularToeplitz { gamma0: f64 },

    #[error("objective is not finite at the starting point")]
    NonFiniteObjective,

    #[error("optimizer failed: {0}")]
    OptimizerFailure(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("no observation could be evaluated ({skipped} skipped)")]
    NoEvaluablePoints { skipped: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid configuration field `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("time column is not strictly increasing at line {line}")]
    NonMonotonicTime { line: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain {
        field,
        reason: reason.into(),
    }
}
