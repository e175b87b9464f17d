use thiserror::Error;

pub type Result<T, E = ToricError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error("dimension mismatch: expected rank {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    /// The input is outside the domain of the operation.
    #[error("{0}")]
    Domain(String),

    /// A bounded search ran out of room before settling the question.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl ToricError {
    pub fn domain(msg: impl Into<String>) -> Self {
        ToricError::Domain(msg.into())
    }

    pub fn inconclusive(msg: impl Into<String>) -> Self {
        ToricError::Inconclusive(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        ToricError::Internal(msg.into())
    }

    /// Process exit code: 1 domain/validation, 2 inconclusive, 3 I/O or parse.
    pub fn exit_code(&self) -> i32 {
        match self {
            ToricError::Dimension { .. } | ToricError::Domain(_) | ToricError::Internal(_) => 1,
            ToricError::Inconclusive(_) => 2,
            ToricError::Parse(_) | ToricError::Io(_) => 3,
        }
    }
}

impl From<serde_json::Error> for ToricError {
    fn from(e: serde_json::Error) -> Self {
        ToricError::Parse(e.to_string())
    }
}

impl From<std::io::Error> for ToricError {
    fn from(e: std::io::Error) -> Self {
        ToricError::Io(e.to_string())
    }
}
