use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("directed cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),

    #[error("duplicate {kind} edge between {a} and {b}")]
    DuplicateEdge {
        kind: &'static str,
        a: String,
        b: String,
    },

    #[error("self-loop at {0}")]
    SelfLoop(String),

    #[error("opposing directed edges {a} -> {b} and {b} -> {a}")]
    OpposingDirected { a: String, b: String },

    #[error("vertex index {index} out of range for {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },

    #[error("graph has {n} vertices; at most {max} are supported")]
    TooManyVertices { n: usize, max: usize },

    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),

    #[error("unknown vertex label {0:?}")]
    UnknownLabel(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{what}: {n} vertices exceeds the enumeration bound of {bound}")]
    BoundExceeded {
        what: &'static str,
        n: usize,
        bound: usize,
    },

    #[error("set {0} is not ancestral")]
    NotAncestral(String),

    #[error("vertex {vertex} is not in barren({set})")]
    NotBarren { vertex: String, set: String },

    #[error("{0} is not a head")]
    NotAHead(String),

    #[error("a head must be nonempty")]
    EmptyHead,

    #[error("vertex {vertex} is not in {set}")]
    VertexNotInSet { vertex: String, set: String },

    #[error("vertex {0} is already in the ancestral set")]
    VertexAlreadyInSet(String),

    #[error("no total order is consistent with the depth orderings")]
    NoConsistentOrder,

    #[error("sets must be pairwise disjoint")]
    Disjointness,

    #[error("minimal Markov blanket is not unique: {first} vs {second}")]
    NonUniqueBlanket { first: String, second: String },

    #[error("table has {table} variables but the graph has {graph} vertices")]
    DimensionMismatch { table: usize, graph: usize },

    #[error("invalid joint table: {0}")]
    InvalidTable(String),

    #[error("{} conditioning event(s) with ~zero probability", .0.len())]
    DegenerateConditioning(Vec<DegenerateEntry>),

    #[error("parametrization incomplete: {0}")]
    IncompleteParams(String),

    #[error("order is not consistent with the ancestor relations: {0}")]
    InconsistentOrder(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("{0}")]
    Json(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// A parameter `P(X_H = 0 | X_tail = t)` whose conditioning event has
/// (numerically) zero probability.
#[derive(Debug, Clone, PartialEq)]
pub struct DegenerateEntry {
    pub head: crate::VertexSet,
    pub tail: crate::VertexSet,
    /// Tail assignment, bit `i` is the value of the `i`-th tail vertex.
    pub tail_bits: u64,
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
