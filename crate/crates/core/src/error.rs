use thiserror::Error;

/// Errors returned by the metric and distortion routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// NaN/Inf coordinates or a parameter outside its admissible range.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A point lies outside the open domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested quantity does not exist for this configuration.
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
