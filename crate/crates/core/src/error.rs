use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {point} lies outside the ambient set (n = {n})")]
    OutOfRange { point: String, n: u32 },

    #[error("elements belong to different groups: {left} vs {right}")]
    GroupMismatch { left: String, right: String },

    #[error("invalid group literal `{0}`")]
    InvalidGroup(String),

    #[error("hypergraph would have {requested} triangles, cap is {cap}")]
    SizeCap { requested: u64, cap: u64 },

    #[error("group of order {order} exceeds the search cap {cap}")]
    GroupTooLarge { order: u64, cap: u64 },

    #[error("invalid search budget: {0}")]
    InvalidBudget(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
