use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid uniformity r = {0} (need r >= 2)")]
    InvalidUniformity(usize),
    #[error("vertex count t = {t} is invalid for r = {r} (need r <= t <= {max})")]
    InvalidVertexCount { t: usize, r: usize, max: usize },
    #[error("edge {edge:?} is not a strictly increasing {r}-tuple inside 1..={t}")]
    InvalidEdge { edge: Vec<usize>, r: usize, t: usize },
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<usize>),
    #[error("requested {m} edges but only {available} r-subsets exist")]
    TooManyEdges { m: u128, available: u128 },
    #[error("vertex set of size {size} has no link in an {r}-graph")]
    LinkTooLarge { size: usize, r: usize },
    #[error("vertex {vertex} is outside 1..={t}")]
    VertexOutOfRange { vertex: usize, t: usize },
    #[error("weighting has length {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("invalid weighting: {0}")]
    InvalidWeighting(String),
    #[error("non-finite value during ascent at iteration {0}")]
    NumericalFault(usize),
    #[error("operation requires r = {expected}, got r = {got}")]
    WrongUniformity { expected: usize, got: usize },
    #[error("search space too large: {size} candidates exceeds the cap of {cap}")]
    SearchTooLarge { size: u128, cap: u128 },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
