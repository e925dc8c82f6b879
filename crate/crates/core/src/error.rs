use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {0} is unreachable from the source")]
    Unreachable(usize),
    #[error("terminal set has odd cardinality {0}")]
    OddTerminals(usize),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("{what} refused: size {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("graph is not 2-vertex-connected: {0} is a cut vertex")]
    CutVertex(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("structural error: {0}")]
    Structure(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
