use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HitError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("at most {max} variables are supported, got {n}")]
    TooManyVariables { n: usize, max: usize },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },

    #[error("variable count mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("no spike of degree {d} exists in {n} variables")]
    NoSpike { n: usize, d: u32 },

    #[error("matrix is singular over F2")]
    SingularMatrix,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("slice ({n}, {d}) needs {columns} columns, above the limit of {limit}")]
    Infeasible { n: usize, d: u32, columns: u64, limit: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, HitError>;
