use thiserror::Error;

/// Errors produced by the security-analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside its mathematical or physical domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A state, spectrum or covariance matrix violates a physical validity
    /// condition (e.g. the uncertainty principle).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A numerical routine failed to produce a trustworthy result.
    #[error("numeric failure: {0}")]
    NumericFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
