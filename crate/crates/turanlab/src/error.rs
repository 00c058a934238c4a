use thiserror::Error;

use crate::orientation::BottleCertificate;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The input is structurally valid but larger than the operation supports.
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    /// A materialization guard (edge-count cap) was hit.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// An operation requiring an orientable hypergraph was given one that is
    /// not; the certificate proves it.
    #[error("hypergraph is not orientable (bottle of size {})", .0.sequence().len())]
    NotOrientable(BottleCertificate),

    /// Interval arithmetic could not certify a comparison either way.
    #[error("indeterminate: {0}")]
    Indeterminate(String),

    /// A text file did not match its format.
    #[error("parse error: {0}")]
    Parse(String),

    /// Two supposedly equivalent computation routes disagreed.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
