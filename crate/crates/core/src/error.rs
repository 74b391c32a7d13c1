use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("invalid demand: {0}")]
    InvalidDemand(String),
    #[error("graph contains a cycle through node {0}")]
    Cycle(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("unknown source {0}")]
    UnknownSource(String),
    #[error("delta {delta} exceeds capacity {capacity} of edge {edge}")]
    DeltaExceedsCapacity { edge: String, delta: String, capacity: String },
    #[error("invalid delta: {0}")]
    InvalidDelta(String),
    #[error("terminal sets overlap at node {0}")]
    OverlappingTerminals(String),
    #[error("too large: {0}")]
    SizeLimit(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("blocklength {n} not admissible: {what} is not an integer number of bits")]
    Blocklength { n: u32, what: String },
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("unsupported demand type: {0}")]
    UnsupportedDemand(String),
    #[error("structure check failed: {0}")]
    Structure(String),
    #[error("enumeration refused: search space of {estimate} codes exceeds budget {budget}")]
    BudgetExceeded { estimate: String, budget: u64 },
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), message: message.into() }
    }
}
