//! Fuzzy c-modes with modularity spatial correction (FCMo-MSC).
//!
//! Categorical attributes, squared simple-matching (Hamming) distance,
//! prototypes given by per-attribute weighted modes.

use ndarray::Array2;

use crate::engine::{entropy_term, offdiag_product, row_softmax, AlternatingModel};
use crate::error::{CoreError, Result};
use crate::fit::{FitConfig, FitResult, Prototypes};
use crate::graph::{AdjacencyMatrix, ModularityMatrix};
use crate::membership::MembershipMatrix;

/// Code for one category within an attribute's domain.
pub type CategoryCode = u32;

/// One attribute's finite unordered domain. The declared order of the
/// categories is meaningful: it breaks ties in the mode argmax.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub name: String,
    pub categories: Vec<String>,
}

impl Domain {
    pub fn n_categories(&self) -> usize {
        self.categories.len()
    }
}

/// N x I table of category codes, each column governed by its own domain.
#[derive(Debug, Clone)]
pub struct CategoricalAttributeMatrix {
    entries: Array2<CategoryCode>,
    domains: Vec<Domain>,
}

impl CategoricalAttributeMatrix {
    pub fn new(entries: Array2<CategoryCode>, domains: Vec<Domain>) -> Result<Self> {
        let (n, i) = entries.dim();
        if n < 2 {
            return Err(CoreError::InvalidInput(
                "at least two units are required".into(),
            ));
        }
        if i == 0 || domains.len() != i {
            return Err(CoreError::DimensionMismatch(format!(
                "{} attribute columns but {} domains",
                i,
                domains.len()
            )));
        }
        for (col, domain) in domains.iter().enumerate() {
            if domain.categories.is_empty() {
                return Err(CoreError::DomainMismatch(format!(
                    "domain for attribute '{}' is empty",
                    domain.name
                )));
            }
            for row in 0..n {
                let code = entries[[row, col]];
                if code as usize >= domain.n_categories() {
                    return Err(CoreError::DomainMismatch(format!(
                        "unit {row} carries code {code} for attribute '{}' whose domain has {} categories",
                        domain.name,
                        domain.n_categories()
                    )));
                }
            }
        }
        Ok(Self { entries, domains })
    }

    pub fn n_units(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_attrs(&self) -> usize {
        self.entries.ncols()
    }

    pub fn entries(&self) -> &Array2<CategoryCode> {
        &self.entries
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domains
    }

    pub fn row(&self, n: usize) -> &[CategoryCode] {
        self.entries.row(n).to_slice().expect("row-major storage")
    }
}

/// Simple-matching (Hamming) distance: the number of mismatched positions.
pub fn hamming_distance(x: &[CategoryCode], y: &[CategoryCode]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "categorical rows of length {} and {}",
            x.len(),
            y.len()
        )));
    }
    Ok(x.iter().zip(y).filter(|(a, b)| a != b).count())
}

/// C x I prototype table: the weighted per-attribute mode of each cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeSet {
    entries: Array2<CategoryCode>,
}

impl ModeSet {
    /// Validates every code against the matching attribute domain.
    pub fn new(entries: Array2<CategoryCode>, domains: &[Domain]) -> Result<Self> {
        if entries.ncols() != domains.len() {
            return Err(CoreError::DimensionMismatch(format!(
                "{} mode columns but {} domains",
                entries.ncols(),
                domains.len()
            )));
        }
        for c in 0..entries.nrows() {
            for (i, domain) in domains.iter().enumerate() {
                if entries[[c, i]] as usize >= domain.n_categories() {
                    return Err(CoreError::DomainMismatch(format!(
                        "mode of cluster {c} carries code {} for attribute '{}'",
                        entries[[c, i]],
                        domain.name
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn n_clusters(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<CategoryCode> {
        &self.entries
    }

    pub fn row(&self, c: usize) -> &[CategoryCode] {
        self.entries.row(c).to_slice().expect("row-major storage")
    }
}

/// Membership-weighted mode of every (cluster, attribute) pair: the category
/// maximizing `sum_n u_{n,c} [x_{n,i} = v]`. Ties resolve to the category
/// that comes first in the domain's declared order; categories never
/// observed in the data have weight zero and cannot win.
pub fn update_modes(x: &CategoricalAttributeMatrix, u: &MembershipMatrix) -> Result<ModeSet> {
    if u.n_units() != x.n_units() {
        return Err(CoreError::DimensionMismatch(format!(
            "membership has {} rows but there are {} units",
            u.n_units(),
            x.n_units()
        )));
    }
    let mut entries = Array2::zeros((u.n_clusters(), x.n_attrs()));
    for c in 0..u.n_clusters() {
        for (i, domain) in x.domains().iter().enumerate() {
            let mut weights = vec![0.0f64; domain.n_categories()];
            for n in 0..x.n_units() {
                weights[x.entries[[n, i]] as usize] += u.entries()[[n, c]];
            }
            let mut best = 0usize;
            for (v, &w) in weights.iter().enumerate().skip(1) {
                if w > weights[best] {
                    best = v;
                }
            }
            entries[[c, i]] = best as CategoryCode;
        }
    }
    Ok(ModeSet { entries })
}

/// Objective value: as the medoid objective with the squared Hamming
/// distance to the cluster mode in place of the squared Euclidean distance.
pub fn objective(
    x: &CategoricalAttributeMatrix,
    b: &ModularityMatrix,
    u: &MembershipMatrix,
    modes: &ModeSet,
    cfg: &FitConfig,
) -> Result<f64> {
    check_dims(x, Some(b), u, modes)?;
    let mut dist_term = 0.0;
    for c in 0..modes.n_clusters() {
        for n in 0..x.n_units() {
            let d = hamming_distance(x.row(n), modes.row(c))? as f64;
            dist_term += u.entries()[[n, c]] * d * d;
        }
    }
    let network = offdiag_product(b.entries(), u);
    let modularity = (&network * u.entries()).sum();
    Ok((1.0 - cfg.gamma) * dist_term + cfg.entropy_weight * entropy_term(u)
        - 0.5 * cfg.gamma * modularity)
}

fn attr_weight(cfg: &FitConfig) -> f64 {
    if cfg.unweighted_attr_update {
        1.0
    } else {
        1.0 - cfg.gamma
    }
}

/// One closed-form membership sweep against the previous memberships.
///
/// By default the squared Hamming term carries the `(1 - gamma)` weight the
/// objective implies; `cfg.unweighted_attr_update` switches to the legacy
/// variant that leaves the distance term unweighted.
pub fn update_membership(
    x: &CategoricalAttributeMatrix,
    b: &ModularityMatrix,
    u_prev: &MembershipMatrix,
    modes: &ModeSet,
    cfg: &FitConfig,
) -> Result<MembershipMatrix> {
    check_dims(x, Some(b), u_prev, modes)?;
    let network = offdiag_product(b.entries(), u_prev);
    let weight = attr_weight(cfg);
    let mut exponents = Array2::zeros((x.n_units(), modes.n_clusters()));
    for c in 0..modes.n_clusters() {
        for n in 0..x.n_units() {
            let d = hamming_distance(x.row(n), modes.row(c))? as f64;
            exponents[[n, c]] =
                -(weight * d * d - cfg.gamma * network[[n, c]]) / cfg.entropy_weight;
        }
    }
    Ok(row_softmax(exponents))
}

/// First-order optimality gap of the membership update in use, as
/// [`crate::medoids::stationarity_gap`] with the squared Hamming distance.
pub fn stationarity_gap(
    x: &CategoricalAttributeMatrix,
    b: &ModularityMatrix,
    u: &MembershipMatrix,
    modes: &ModeSet,
    cfg: &FitConfig,
) -> Result<f64> {
    check_dims(x, Some(b), u, modes)?;
    let network = offdiag_product(b.entries(), u);
    let weight = attr_weight(cfg);
    let mut worst: f64 = 0.0;
    for n in 0..x.n_units() {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for c in 0..modes.n_clusters() {
            let d = hamming_distance(x.row(n), modes.row(c))? as f64;
            let g = u.entries()[[n, c]].ln()
                + (weight * d * d - cfg.gamma * network[[n, c]]) / cfg.entropy_weight;
            lo = lo.min(g);
            hi = hi.max(g);
        }
        worst = worst.max(hi - lo);
    }
    Ok(worst)
}

struct ModeMscModel<'a> {
    x: &'a CategoricalAttributeMatrix,
    b: &'a ModularityMatrix,
    gamma: f64,
    p: f64,
    attr_weight: f64,
}

impl ModeMscModel<'_> {
    fn mode_distances(&self, modes: &ModeSet) -> Array2<f64> {
        let mut d = Array2::zeros((self.x.n_units(), modes.n_clusters()));
        for c in 0..modes.n_clusters() {
            for n in 0..self.x.n_units() {
                d[[n, c]] = hamming_distance(self.x.row(n), modes.row(c))
                    .expect("equal row lengths") as f64;
            }
        }
        d
    }
}

impl AlternatingModel for ModeMscModel<'_> {
    type Proto = ModeSet;

    fn n_units(&self) -> usize {
        self.x.n_units()
    }

    fn init_prototypes(&self, u: &MembershipMatrix) -> ModeSet {
        update_modes(self.x, u).expect("dimensions checked by the fit entry point")
    }

    fn update_prototypes(&self, u: &MembershipMatrix, _prev: &ModeSet) -> ModeSet {
        update_modes(self.x, u).expect("dimensions checked by the fit entry point")
    }

    fn update_membership(&self, u_prev: &MembershipMatrix, proto: &ModeSet) -> MembershipMatrix {
        let network = offdiag_product(self.b.entries(), u_prev);
        let dist = self.mode_distances(proto);
        let mut exponents = Array2::zeros((self.x.n_units(), proto.n_clusters()));
        for c in 0..proto.n_clusters() {
            for n in 0..self.x.n_units() {
                let d = dist[[n, c]];
                exponents[[n, c]] =
                    -(self.attr_weight * d * d - self.gamma * network[[n, c]]) / self.p;
            }
        }
        row_softmax(exponents)
    }

    fn objective(&self, u: &MembershipMatrix, proto: &ModeSet) -> f64 {
        let dist = self.mode_distances(proto);
        let mut dist_term = 0.0;
        for c in 0..proto.n_clusters() {
            for n in 0..self.x.n_units() {
                dist_term += u.entries()[[n, c]] * dist[[n, c]] * dist[[n, c]];
            }
        }
        let network = offdiag_product(self.b.entries(), u);
        let modularity = (&network * u.entries()).sum();
        (1.0 - self.gamma) * dist_term + self.p * entropy_term(u) - 0.5 * self.gamma * modularity
    }
}

/// Multi-restart alternating fit (modes updated before memberships on every
/// sweep); returns the restart with the lowest objective.
pub fn fit_fcmo_msc(
    x: &CategoricalAttributeMatrix,
    a: &AdjacencyMatrix,
    cfg: &FitConfig,
) -> Result<FitResult> {
    if a.n_units() != x.n_units() {
        return Err(CoreError::DimensionMismatch(format!(
            "{} attribute rows but {} network units",
            x.n_units(),
            a.n_units()
        )));
    }
    cfg.validate_for_fit(x.n_units())?;
    let b = ModularityMatrix::from_adjacency(a)?;
    fit_fcmo_msc_with_modularity(x, &b, cfg)
}

/// Same as [`fit_fcmo_msc`] but reuses an already-built modularity matrix.
pub fn fit_fcmo_msc_with_modularity(
    x: &CategoricalAttributeMatrix,
    b: &ModularityMatrix,
    cfg: &FitConfig,
) -> Result<FitResult> {
    if b.n_units() != x.n_units() {
        return Err(CoreError::DimensionMismatch(format!(
            "{} attribute rows but {} network units",
            x.n_units(),
            b.n_units()
        )));
    }
    cfg.validate_for_fit(x.n_units())?;
    let model = ModeMscModel {
        x,
        b,
        gamma: cfg.gamma,
        p: cfg.entropy_weight,
        attr_weight: attr_weight(cfg),
    };
    let outcome = crate::engine::run_restarts(
        &model,
        cfg.n_clusters,
        cfg.max_iter,
        cfg.conv_tol,
        cfg.n_restarts,
        cfg.seed,
    );
    Ok(FitResult {
        membership: outcome.membership,
        prototypes: Prototypes::Modes(outcome.prototypes),
        objective: outcome.objective,
        n_iterations: outcome.n_iterations,
        converged: outcome.converged,
        restart_index: outcome.restart_index,
    })
}

fn check_dims(
    x: &CategoricalAttributeMatrix,
    b: Option<&ModularityMatrix>,
    u: &MembershipMatrix,
    modes: &ModeSet,
) -> Result<()> {
    if u.n_units() != x.n_units() {
        return Err(CoreError::DimensionMismatch(format!(
            "membership has {} rows but there are {} units",
            u.n_units(),
            x.n_units()
        )));
    }
    if let Some(b) = b {
        if b.n_units() != x.n_units() {
            return Err(CoreError::DimensionMismatch(format!(
                "network has {} units but there are {} attribute rows",
                b.n_units(),
                x.n_units()
            )));
        }
    }
    if modes.n_clusters() != u.n_clusters() {
        return Err(CoreError::DimensionMismatch(format!(
            "{} modes for {} membership columns",
            modes.n_clusters(),
            u.n_clusters()
        )));
    }
    if modes.entries.ncols() != x.n_attrs() {
        return Err(CoreError::DimensionMismatch(format!(
            "modes cover {} attributes but the data has {}",
            modes.entries.ncols(),
            x.n_attrs()
        )));
    }
    Ok(())
}
