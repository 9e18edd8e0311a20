use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed scalar `{0}`")]
    Scalar(String),
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("invalid algebra: {0}")]
    Algebra(String),
    #[error("basis mismatch: {0} vs {1} columns")]
    BasisMismatch(usize, usize),
    #[error("unknown product symbol `{0}` for this interpretation")]
    UnknownOp(String),
    #[error("arity {got} exceeds the configured bound {max}")]
    ArityBound { got: usize, max: usize },
    #[error("word length {got} would exceed truncation bound {bound}")]
    Overflow { got: usize, bound: usize },
    #[error("{0}")]
    Mismatch(String),
    #[error("identity violated: {0}")]
    Violated(String),
    #[error("unknown variety `{0}`")]
    UnknownVariety(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
