use thiserror::Error;

/// Errors raised while building or reading a [`crate::Hypergraph`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("uniformity must be at least 2, got {0}")]
    BadUniformity(usize),
    #[error("edge {index} has {got} vertices, expected {expected}")]
    WrongEdgeSize { index: usize, got: usize, expected: usize },
    #[error("edge {index} repeats vertex {vertex}")]
    RepeatedVertex { index: usize, vertex: u32 },
    #[error("edge {index} uses vertex {vertex} outside [0, {n})")]
    VertexOutOfRange { index: usize, vertex: u32, n: usize },
    #[error("edge {index} duplicates edge {first}")]
    DuplicateEdge { index: usize, first: usize },
    #[error("invalid partite layout: {0}")]
    Layout(String),
}

/// Errors from the constructors and the number-theory helpers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("slope {0} appears twice modulo q")]
    DuplicateSlope(i64),
    #[error("lines coincide: {0}")]
    CoincidentLines(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// Errors from exact linear algebra and crossing-system checks.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("malformed crossing system: {0}")]
    Malformed(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("crossing system fails axiom {0}")]
    Precondition(String),
    #[error("crossing system does not have the expected structure: {0}")]
    StructureMismatch(String),
}

/// Errors from the detectors, the code checks and the purge engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("index {index} out of range for {len} edges")]
    IndexOutOfRange { index: usize, len: usize },
    #[error(transparent)]
    Construct(#[from] ConstructError),
}
