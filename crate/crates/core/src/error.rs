use thiserror::Error;

/// Input errors shared by every module. Search failures and hypothesis
/// violations are ordinary return values, not errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range for a graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("operation requires a non-empty graph")]
    EmptyGraph,
    #[error("operation requires a non-empty vertex set")]
    EmptyVertexSet,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("tuple lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("vertex set {0:?} is not a clique")]
    NotAClique(Vec<usize>),
    #[error("matching is invalid: {0}")]
    InvalidMatching(String),
    #[error("matching is not maximal: edge {0}-{1} joins two unmatched vertices")]
    MatchingNotMaximal(usize, usize),
    #[error("part size {part} is not a multiple of the catalogued order {order} of `{key}`")]
    IncompatiblePartSize { key: String, part: usize, order: usize },
    #[error("unknown part-graph key `{0}`")]
    UnknownPartGraph(String),
    #[error("order {n} exceeds the exhaustive ceiling {ceiling}; request a lower-bound run instead")]
    AboveCeiling { n: usize, ceiling: usize },
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
