use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not supported on the symmetric subspace (residual {residual:e})")]
    NotSymmetric { residual: f64 },

    #[error("not a valid density operator: {0}")]
    InvalidState(String),

    /// The reduced input has (numerically) zero Bloch vector, so a ratio of
    /// Bloch lengths is undefined.
    #[error("degenerate input: reduced Bloch vector length {length:e} is below {threshold:e}")]
    DegenerateInput { length: f64, threshold: f64 },

    #[error("output Bloch vector rotated by {angle:e} rad relative to the input")]
    Orientation { angle: f64 },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
