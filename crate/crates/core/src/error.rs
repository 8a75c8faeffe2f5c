use thiserror::Error;

/// Errors raised by the bag, hypergraph, flow and consistency routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("invalid attribute name {0:?}")]
    InvalidAttribute(String),

    #[error("duplicate attribute {0:?} in schema")]
    DuplicateAttribute(String),

    #[error("invalid bag: {0}")]
    InvalidBag(String),

    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    #[error("inapplicable safe-deletion operation: {0}")]
    InapplicableOperation(String),

    #[error("invalid flow: {0}")]
    InvalidFlow(String),

    #[error("no middle arc for join tuple {0}")]
    MissingArc(String),

    #[error("hypergraph is cyclic; use the oracle to decide global consistency")]
    CyclicHypergraph,

    #[error("invalid database: {0}")]
    InvalidDatabase(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("oracle resource limit exceeded: {0}")]
    ResourceExhausted(String),

    #[error("malformed JSON at {path}: {message}")]
    Json { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
