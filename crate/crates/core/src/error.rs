use crate::model::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("cycle in parent pointers through node {0}")]
    Cycle(NodeId),

    #[error("invalid selection: {0}")]
    InvalidSelection(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid cost model at node {node}: cost_a {cost_a} exceeds cost_r {cost_r}")]
    InvalidCostModel { node: NodeId, cost_r: u64, cost_a: u64 },

    #[error("malformed XML at byte {offset}: {message}")]
    XmlParse { offset: u64, message: String },

    #[error("invalid document: {0}")]
    InvalidDocument(String),

    #[error("value {value} outside [0, {max}]")]
    OutOfRange { value: u64, max: u64 },

    /// Brute-force enumeration refused: too many selectable nodes or items.
    #[error("instance too large for exhaustive search ({count} > cap {cap}); use the dp solver")]
    TooLarge { count: usize, cap: usize },

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by a size/memory cap rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::TooLarge { .. } | Error::ResourceLimit(_))
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}
