use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group mismatch: {0}")]
    SpecMismatch(String),

    #[error("{what} exceeds cap: {got} > {limit}")]
    CapExceeded { what: &'static str, limit: u64, got: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A bound that the construction guarantees was observed to fail.
    #[error("assertion failed: {0}")]
    Assertion(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn cap(what: &'static str, limit: u64, got: u64) -> Self {
        Error::CapExceeded { what, limit, got }
    }
}

pub(crate) fn check_cap(what: &'static str, limit: u64, got: u64) -> Result<()> {
    if got > limit {
        Err(Error::cap(what, limit, got))
    } else {
        Ok(())
    }
}
