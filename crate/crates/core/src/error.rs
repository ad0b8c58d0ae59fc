use std::fmt;

use thiserror::Error;

/// Which connectivity condition a move broke.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// Taken vertices must induce a connected subgraph.
    T,
    /// Remaining vertices must induce a connected subgraph.
    R,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::T => f.write_str("T"),
            Condition::R => f.write_str("R"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("vertex {vertex} is not available: condition ({condition}) violated")]
    IllegalMove { vertex: usize, condition: Condition },

    #[error("vertex {0} is already taken")]
    AlreadyTaken(usize),

    #[error("invalid ruleset: {0}")]
    Ruleset(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameters: {0}")]
    Params(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("memo capacity of {cap} entries exceeded after expanding {expanded} states")]
    MemoCapacity { cap: usize, expanded: u64 },

    #[error("strategy {name}: {msg}")]
    Strategy { name: String, msg: String },

    #[error("formula shape: {0}")]
    Shape(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by exhausting a configured resource limit.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::MemoCapacity { .. } | Error::TooLarge(_))
    }

    pub(crate) fn strategy(name: &str, msg: impl Into<String>) -> Self {
        Error::Strategy {
            name: name.to_string(),
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
