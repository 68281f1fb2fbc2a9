use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate dart ({0}, {1})")]
    DuplicateDart(usize, usize),
    #[error("vertex {vertex} out of range for order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid order {0}")]
    InvalidOrder(usize),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("digraph is disconnected")]
    Disconnected,
    #[error("input is not a graph")]
    NotAGraph,
    #[error("theorem hypotheses not met: {0}")]
    HypothesesNotMet(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("permutation is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("permutation is not a reversal: {0}")]
    NotReversal(String),
    #[error("not a subgroup of Aut: {0}")]
    NotSubgroup(String),
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("unknown census entry {0}")]
    UnknownEntry(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
