//! Error type shared by every module in the crate.

use alloc::string::String;
use core::fmt;

/// Library error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input: shape mismatches, empty collections,
    /// out-of-range indices, non-finite values.
    InvalidInput(String),
    /// Argument outside the mathematical domain of the operation.
    Domain(String),
    /// The requested method cannot handle this instance.
    Unsupported(String),
    /// Exact search would exceed its instance-size budget.
    SearchBudget(String),
    /// Inconsistent run configuration.
    Config(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported method: {msg}"),
            Error::SearchBudget(msg) => write!(f, "search budget exceeded: {msg}"),
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
