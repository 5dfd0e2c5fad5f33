use crate::model::NodeId;

/// Unified error type for the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A transmission schedule's domain does not equal the tree's non-leaf set.
    #[error("schedule domain mismatch: missing {missing:?}, extra {extra:?}")]
    ScheduleDomainMismatch {
        missing: Vec<NodeId>,
        extra: Vec<NodeId>,
    },

    /// A hitting-set input contained an empty set (nothing can hit it).
    #[error("hitting-set collection contains an empty set at index {0}")]
    EmptySetInCollection(usize),

    /// A terminal has no satellite neighbor in the extended graph.
    #[error("terminal {0} cannot be covered by any satellite node")]
    UncoverableTerminal(NodeId),

    /// Terminals (or Steiner terminals) span several connected components.
    #[error("terminals are not contained in a single connected component")]
    DisconnectedTerminals,

    /// A satellite bridge failed structural validation.
    #[error("malformed satellite bridge: {0}")]
    MalformedBridge(String),

    /// An exhaustive oracle refused to run outside its enumeration budget.
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),

    /// Catch-all for invalid arguments and malformed input files.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The distributed protocol failed to finish within its round bound.
    #[error("protocol did not terminate within {limit} rounds")]
    NonTermination { limit: u32 },

    /// Topology generation kept producing disconnected terminal sets.
    #[error("topology generation exhausted {attempts} retries without connecting the terminal set")]
    RetryExhausted { attempts: u32 },

    /// Summary statistics were requested over an empty record list.
    #[error("no records to summarize")]
    EmptyRecords,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
