//! Clustering of units that carry both a vector of attributes and a position
//! in a network.
//!
//! Two families of algorithms are provided. The main ones optimize a convex
//! combination of an entropic fuzzy clustering criterion (c-medoids for
//! numeric data, c-modes for categorical data) and the fuzzy modularity of
//! the partition over the network, traded off by a weight `gamma`. The
//! baseline family replaces the modularity term with a plain adjacency
//! penalty, which is known to collapse every unit into one cluster once the
//! penalty weight grows; it is included for comparison.
//!
//! Supporting pieces: a validity index with grid search over the number of
//! clusters and `gamma`, crisp assignment with a fuzzy-unit cutoff rule, and
//! seeded generators for benchmark datasets (stochastic block model networks
//! paired with disk-sampled numeric attributes or probability-table
//! categorical attributes).

pub mod datagen;
pub mod error;
pub mod fit;
pub mod graph;
pub mod medoids;
pub mod membership;
pub mod modes;
pub mod penalty;
pub mod seed;
pub mod validity;

mod engine;

pub use error::{CoreError, Result};
pub use fit::{FitConfig, FitResult, PenaltyConfig, Prototypes};
pub use graph::{fuzzy_modularity, AdjacencyMatrix, ModularityMatrix};
pub use medoids::{fit_fcmd_msc, MedoidSet, NumericAttributeMatrix};
pub use membership::MembershipMatrix;
pub use modes::{fit_fcmo_msc, CategoricalAttributeMatrix, Domain, ModeSet};
pub use penalty::{fit_fcmd_penalty, fit_fcmo_penalty};
pub use validity::{
    crisp_assign, grid_search_medoids, grid_search_modes, CrispLabel, CrispPartition, CutoffRule,
    GridResult, GridSpec, ValidityOptions, ValidityTable,
};
