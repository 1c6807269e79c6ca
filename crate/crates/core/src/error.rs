use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("group schema error: {0}")]
    Schema(String),

    #[error("group axiom violated: {0}")]
    GroupAxiom(String),

    #[error("conjugacy classes invalid: {0}")]
    ClassPartition(String),

    #[error("irreducible dimensions invalid: {0}")]
    DimensionSum(String),

    #[error("character table missing")]
    MissingCharacters,

    #[error("component count mismatch: expected {expected}, got {got}")]
    ComponentMismatch { expected: usize, got: usize },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("enumeration budget exceeded: {needed} elements > budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
