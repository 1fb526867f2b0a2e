use thiserror::Error;

/// Errors produced by every module of the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("fraction undefined: {0}")]
    UndefinedFraction(String),

    #[error("refusing oversized oracle request: {aperture} aperture elements x {samples} detector samples")]
    CostGuard { aperture: usize, samples: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
