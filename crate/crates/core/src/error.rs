use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("invalid lattice input: {0}")]
    Lattice(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("inconsistent splitting: {0}")]
    InvalidSplit(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("labels do not share one weight")]
    WeightMismatch,
    #[error("empty window")]
    EmptyWindow,
}

pub type Result<T> = std::result::Result<T, Error>;
