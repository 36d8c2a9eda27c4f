use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LearnError {
    /// A binary machine was asked to learn from a single class.
    #[error("degenerate training set: {0}")]
    DegenerateTraining(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },
}

pub type Result<T> = std::result::Result<T, LearnError>;
