use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TerrainError {
    #[error("empty terrain file")]
    Empty,
    #[error("terrain needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("x-coordinates not strictly increasing at vertex {vertex}")]
    NotMonotone { vertex: usize },
    #[error("not x-monotone at line {line}")]
    NotMonotoneAtLine { line: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiscretizationError {
    #[error("V(G) ≠ T at x = {x}")]
    Uncovered { x: String },
    #[error("witness cap of {cap} exceeded")]
    WitnessCap { cap: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("terrain needs at least 2 vertices, got {0}")]
    TooSmall(usize),
    #[error("{valleys} valleys do not fit into {n} vertices (each valley adds 6 vertices to a walk edge)")]
    TooManyValleys { valleys: usize, n: usize },
    #[error("valley slack must lie strictly between 0 and 1/2")]
    BadSlack,
    #[error("unknown terrain class {0:?}")]
    UnknownClass(String),
}
