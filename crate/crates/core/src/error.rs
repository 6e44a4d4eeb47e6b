use thiserror::Error;

use crate::graph::GnSignature;

#[derive(Debug, Error)]
pub enum StrataError {
    #[error("moduli space M({g},{n}) does not exist")]
    InvalidSignature { g: u32, n: u32 },

    #[error("invalid dual graph: {0}")]
    InvalidGraph(String),

    #[error("edge id {edge} out of range for a graph with {count} edges")]
    InvalidEdge { edge: usize, count: usize },

    #[error("edge count {k} out of range 1..={max} for {sig}")]
    EdgeCountOutOfRange { sig: GnSignature, k: usize, max: usize },

    #[error("graph budget exceeded: {sig} with {k} edges needs more than {limit} graphs")]
    BudgetExceeded { sig: GnSignature, k: usize, limit: usize },

    #[error("graph is not a boundary divisor of {sig}: {reason}")]
    NotADivisor { sig: GnSignature, reason: String },

    #[error("inputs belong to different moduli spaces: {first} and {second}")]
    MixedSignatures { first: GnSignature, second: GnSignature },

    #[error("empty divisor set")]
    EmptyDivisorSet,

    #[error("unknown canonical key {0}")]
    UnknownKey(String),

    #[error("{0}")]
    OutOfDomain(String),

    #[error("cache file {path}: {message}")]
    Cache { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = StrataError> = std::result::Result<T, E>;
