use thiserror::Error;

/// Errors produced by basis construction, channel building and region
/// exploration.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: need at least {min}, got {got}")]
    InvalidDimension { min: usize, got: usize },

    #[error("{context}: expected length {expected}, got {got}")]
    LengthMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("malformed state: {0}")]
    MalformedState(String),

    #[error("unsupported basis: {0}")]
    UnsupportedBasis(String),

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
