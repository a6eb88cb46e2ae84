use thiserror::Error;

/// Errors raised by the library.
///
/// The variants line up with the process exit codes used by the command line
/// tool: input problems, size-guard refusals, structural violations of an
/// operation's preconditions, and internal invariant breaches.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("guard refused: {0}")]
    Guard(String),

    #[error("structure error: {0}")]
    Structure(String),

    #[error("additivity degree undefined for the all-zero Möbius vector")]
    DegreeUndefined,

    #[error("internal invariant breached: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn guard(msg: impl Into<String>) -> Self {
        Error::Guard(msg.into())
    }

    pub(crate) fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
