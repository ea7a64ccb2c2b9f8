use thiserror::Error;

/// Failure modes shared by every module of the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unfolding failed: {0}")]
    Unfolding(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
