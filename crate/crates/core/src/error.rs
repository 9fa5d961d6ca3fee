use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid height ladder: {0}")]
    InvalidLadder(String),

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("non-integrable decay class: {0}")]
    NonIntegrable(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("unbounded symbol: {0}")]
    UnboundedSymbol(String),

    #[error("bracket not found after {0} doublings")]
    BracketFailure(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty family: {0}")]
    EmptyFamily(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
