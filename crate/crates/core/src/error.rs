use std::io;

use thiserror::Error;

/// Errors produced by table construction, selection and file handling.
#[derive(Debug, Error)]
pub enum Error {
    /// A value failed an input precondition (bad parameter, malformed number).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Constructing a domain type would break one of its invariants.
    #[error("invariant `{invariant}` violated: {detail}")]
    Invariant {
        invariant: &'static str,
        detail: String,
    },

    /// More items were requested than the source can provide.
    #[error("capacity exceeded: requested {requested}, only {available} available")]
    Capacity { requested: usize, available: usize },

    /// Two inputs that must agree with each other do not.
    #[error("inconsistent inputs: {0}")]
    Consistency(String),

    /// A delimited-text file could not be parsed.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invariant(invariant: &'static str, detail: impl Into<String>) -> Error {
    Error::Invariant {
        invariant,
        detail: detail.into(),
    }
}
