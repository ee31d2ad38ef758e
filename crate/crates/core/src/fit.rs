//! Fit configuration and results shared by the clustering algorithms.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::medoids::MedoidSet;
use crate::membership::MembershipMatrix;
use crate::modes::ModeSet;

/// Parameters of the modularity-corrected fits.
///
/// `gamma` trades attribute fit (0) against network modularity (1);
/// `entropy_weight` is the coefficient of the `u log u` term, larger values
/// giving fuzzier partitions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitConfig {
    pub n_clusters: usize,
    pub gamma: f64,
    pub entropy_weight: f64,
    pub max_iter: usize,
    pub conv_tol: f64,
    pub n_restarts: usize,
    pub seed: u64,
    /// Categorical fits only: drop the `(1 - gamma)` weight on the attribute
    /// distance inside the membership update (legacy update variant). The
    /// objective is always evaluated in its weighted form.
    #[serde(default)]
    pub unweighted_attr_update: bool,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            n_clusters: 2,
            gamma: 0.5,
            entropy_weight: 1.0,
            max_iter: 1000,
            conv_tol: 1e-9,
            n_restarts: 10,
            seed: 0,
            unweighted_attr_update: false,
        }
    }
}

impl FitConfig {
    pub(crate) fn validate_for_fit(&self, n_units: usize) -> Result<()> {
        if self.n_clusters < 2 {
            return Err(CoreError::InvalidConfig(
                "a fit needs at least 2 clusters".into(),
            ));
        }
        if n_units < self.n_clusters {
            return Err(CoreError::TooFewUnits {
                n_units,
                n_clusters: self.n_clusters,
            });
        }
        validate_common(
            self.gamma,
            "gamma",
            self.entropy_weight,
            self.max_iter,
            self.conv_tol,
            self.n_restarts,
        )
    }
}

/// Parameters of the adjacency-penalty baseline fits; `beta` plays the role
/// of `gamma` but weights a raw same-cluster adjacency penalty instead of
/// modularity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PenaltyConfig {
    pub n_clusters: usize,
    pub beta: f64,
    pub entropy_weight: f64,
    pub max_iter: usize,
    pub conv_tol: f64,
    pub n_restarts: usize,
    pub seed: u64,
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        Self {
            n_clusters: 2,
            beta: 0.5,
            entropy_weight: 1.0,
            max_iter: 1000,
            conv_tol: 1e-9,
            n_restarts: 10,
            seed: 0,
        }
    }
}

impl PenaltyConfig {
    pub(crate) fn validate_for_fit(&self, n_units: usize) -> Result<()> {
        if self.n_clusters < 2 {
            return Err(CoreError::InvalidConfig(
                "a fit needs at least 2 clusters".into(),
            ));
        }
        if n_units < self.n_clusters {
            return Err(CoreError::TooFewUnits {
                n_units,
                n_clusters: self.n_clusters,
            });
        }
        validate_common(
            self.beta,
            "beta",
            self.entropy_weight,
            self.max_iter,
            self.conv_tol,
            self.n_restarts,
        )
    }
}

fn validate_common(
    weight: f64,
    weight_name: &str,
    entropy_weight: f64,
    max_iter: usize,
    conv_tol: f64,
    n_restarts: usize,
) -> Result<()> {
    if !(0.0..=1.0).contains(&weight) {
        return Err(CoreError::InvalidConfig(format!(
            "{weight_name} = {weight} must lie in [0, 1]"
        )));
    }
    if !(entropy_weight.is_finite() && entropy_weight > 0.0) {
        return Err(CoreError::InvalidConfig(format!(
            "entropy weight = {entropy_weight} must be positive"
        )));
    }
    if max_iter == 0 {
        return Err(CoreError::InvalidConfig("max_iter must be positive".into()));
    }
    if !(conv_tol.is_finite() && conv_tol > 0.0) {
        return Err(CoreError::InvalidConfig(format!(
            "convergence tolerance = {conv_tol} must be positive"
        )));
    }
    if n_restarts == 0 {
        return Err(CoreError::InvalidConfig(
            "at least one restart is required".into(),
        ));
    }
    Ok(())
}

/// Cluster prototypes: actual units for the medoid algorithms, per-attribute
/// category vectors for the mode algorithms.
#[derive(Debug, Clone)]
pub enum Prototypes {
    Medoids(MedoidSet),
    Modes(ModeSet),
}

impl Prototypes {
    pub fn as_medoids(&self) -> Option<&MedoidSet> {
        match self {
            Prototypes::Medoids(m) => Some(m),
            Prototypes::Modes(_) => None,
        }
    }

    pub fn as_modes(&self) -> Option<&ModeSet> {
        match self {
            Prototypes::Modes(m) => Some(m),
            Prototypes::Medoids(_) => None,
        }
    }
}

/// Converged (or iteration-capped) output of a fit: the best restart by
/// objective value.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub membership: MembershipMatrix,
    pub prototypes: Prototypes,
    pub objective: f64,
    pub n_iterations: usize,
    pub converged: bool,
    pub restart_index: usize,
}
