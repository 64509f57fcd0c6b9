use thiserror::Error;

/// Errors raised by graph construction, walk kernels and the exact oracles.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed graph: {0}")]
    MalformedGraph(String),
    #[error("unsupported graph: {0}")]
    UnsupportedGraph(String),
    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),
    #[error("invalid vertex: {0}")]
    InvalidVertex(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no legal move from vertex {vertex}{}", step.map(|s| format!(" at step {s}")).unwrap_or_default())]
    NoLegalMove { vertex: String, step: Option<usize> },
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

impl Error {
    pub(crate) fn no_move(vertex: impl ToString) -> Self {
        Error::NoLegalMove {
            vertex: vertex.to_string(),
            step: None,
        }
    }

    /// Attaches a step index to a `NoLegalMove`; other variants pass through.
    pub fn at_step(self, index: usize) -> Self {
        match self {
            Error::NoLegalMove { vertex, .. } => Error::NoLegalMove {
                vertex,
                step: Some(index),
            },
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
