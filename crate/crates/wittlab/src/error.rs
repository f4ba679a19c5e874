use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, Error)]
pub enum WittError {
    #[error("ring spec mismatch: {0}")]
    SpecMismatch(String),

    #[error("invalid ring spec: {0}")]
    InvalidSpec(String),

    #[error("element is not invertible: {0}")]
    NotInvertible(String),

    #[error("exact division failed: {0}")]
    InexactDivision(String),

    #[error("missing assignment for variable `{0}`")]
    MissingAssignment(String),

    #[error("integrality failure: {0}")]
    NonIntegral(String),

    #[error("index {index} not solvable: {reason}")]
    GhostSolve { index: u64, reason: String },

    #[error("weight/order cap exceeded: {0}")]
    CapExceeded(String),

    #[error("nest too small: {0}")]
    NestTooSmall(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, WittError>;
