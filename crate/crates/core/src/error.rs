use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{what}: size {actual} exceeds the brute-force cap of {limit}")]
    SizeCap {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("degenerate graph: {0}")]
    Degenerate(String),

    #[error("forbidden graph is not strictly 2-balanced: {0}")]
    NotStrictlyTwoBalanced(String),

    #[error("invalid anchor: {0}")]
    InvalidAnchor(String),

    #[error("pair ({0}, {1}) is already an edge")]
    PairIsEdge(usize, usize),

    #[error("invalid pair: {0}")]
    InvalidPair(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("edge set contains the forbidden graph")]
    ContainsForbidden,

    #[error("observer failed at step {step}: {msg}")]
    Observer { step: u64, msg: String },

    #[error("counting cost cap exceeded: {0}")]
    CostCap(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
