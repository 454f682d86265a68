use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("splitting failed; a larger scalar field is needed")]
    NeedsLargerField,
    #[error("character is not regular (equal to its Galois conjugate)")]
    NotRegular,
    #[error("representation is not integral")]
    NotIntegral,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
