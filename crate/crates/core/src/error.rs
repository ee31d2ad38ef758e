//! Error type shared by every module in this crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("adjacency matrix is not symmetric: {0}")]
    AsymmetricAdjacency(String),

    #[error("network has zero total strength; modularity is undefined")]
    ZeroStrengthNetwork,

    #[error("{n_units} units cannot host {n_clusters} clusters")]
    TooFewUnits { n_units: usize, n_clusters: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("category domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("zero within-cluster compactness; the validity index is degenerate")]
    ZeroCompactness,
}

pub type Result<T> = std::result::Result<T, CoreError>;
