use thiserror::Error;

use crate::digraph::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("graph is not strongly connected")]
    NotStronglyConnected,

    #[error("graph has {n} vertices; this operation supports at most {max}")]
    TooLarge { n: usize, max: usize },

    /// The caller asked for a check outside the hypothesis it is stated for.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// A claimed inequality or identity was observed to fail.
    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// True for errors caused by inputs that violate an operation's
    /// preconditions (as opposed to I/O, parse, or failed checks).
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Argument(_)
                | Error::VertexOutOfRange { .. }
                | Error::NotStronglyConnected
                | Error::TooLarge { .. }
                | Error::Hypothesis(_)
        )
    }
}
