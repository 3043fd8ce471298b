use thiserror::Error;

/// Domain errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed graph: {0}")]
    MalformedGraph(String),
    #[error("graph is disconnected; no finite diameter")]
    Disconnected,
    #[error("unknown element id: {0}")]
    UnknownElement(String),
    #[error("{0} is not a supported prime power")]
    UnsupportedFieldOrder(u64),
    #[error("invalid transversal design parameters: {0}")]
    BadDesignParams(String),
    #[error("nodes {0} and {1} lie in the same group")]
    SameGroupPair(String, String),
    #[error("construction precondition violated: {0}")]
    BadConstruction(String),
    #[error("routing precondition violated: {0}")]
    BadRouting(String),
    #[error("internal routing failure (output failed self-check): {0}")]
    RoutingSelfCheck(String),
    #[error("DCN precondition violated: {0}")]
    BadDcn(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
