use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("matrix dimension {0} exceeds the dense limit of {1}")]
    DimensionOverflow(usize, usize),

    #[error("sparsity p = {0} is outside (0, 1)")]
    InvalidSparsity(f64),

    #[error("operation not supported for ensemble kind {0}")]
    UnsupportedKind(String),

    #[error("invalid cumulant profile: {0}")]
    InvalidProfile(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("QL iteration did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("edge not found: R'(w) has no sign change in [{lo}, {hi}]")]
    EdgeNotFound { lo: f64, hi: f64 },

    #[error("continuation lost the root at z = {re} + {im}i")]
    ContinuationFailure { re: f64, im: f64 },

    #[error("free-convolution edge is degenerate: {0}")]
    EdgeDegenerate(String),

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("regime guard: {0}")]
    RegimeGuard(String),

    #[error("empty sample")]
    EmptySample,

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
