use thiserror::Error;

/// Errors produced by graph construction, parsing and analysis.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed graph6: {0}")]
    Graph6(String),

    #[error("pattern too large: {got} vertices (limit {limit})")]
    PatternTooLarge { got: usize, limit: usize },

    #[error("pattern has no pair of non-incident edges")]
    NoRungPair,

    #[error("invalid rung pair: {0}")]
    InvalidRungs(String),

    #[error("pattern is not strictly balanced")]
    NotStrictlyBalanced,

    #[error("lambda is undefined for patterns on fewer than 3 vertices")]
    LambdaUndefined,

    #[error("edge ({0}, {1}) is not in the closure")]
    NotInClosure(usize, usize),

    #[error("inconsistent closure trace: {0}")]
    InconsistentTrace(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
