//! Fuzzy c-medoids with modularity spatial correction (FCMd-MSC).
//!
//! Numeric attributes, squared Euclidean distance, prototypes restricted to
//! actual data units. Memberships have a closed-form update; medoids are
//! re-selected each sweep by brute-force search over the units currently
//! assigned (by argmax) to the cluster.

use ndarray::Array2;

use crate::engine::{entropy_term, offdiag_product, row_softmax, AlternatingModel};
use crate::error::{CoreError, Result};
use crate::fit::{FitConfig, FitResult, Prototypes};
use crate::graph::{AdjacencyMatrix, ModularityMatrix};
use crate::membership::MembershipMatrix;

/// N x I table of real-valued attributes, one row per unit.
#[derive(Debug, Clone)]
pub struct NumericAttributeMatrix {
    entries: Array2<f64>,
}

impl NumericAttributeMatrix {
    pub fn new(entries: Array2<f64>) -> Result<Self> {
        let (n, i) = entries.dim();
        if n < 2 {
            return Err(CoreError::InvalidInput(
                "at least two units are required".into(),
            ));
        }
        if i == 0 {
            return Err(CoreError::InvalidInput(
                "at least one attribute is required".into(),
            ));
        }
        if let Some(v) = entries.iter().find(|v| !v.is_finite()) {
            return Err(CoreError::InvalidInput(format!(
                "attribute value {v} is not finite"
            )));
        }
        Ok(Self { entries })
    }

    pub fn n_units(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_attrs(&self) -> usize {
        self.entries.ncols()
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn row(&self, n: usize) -> &[f64] {
        self.entries.row(n).to_slice().expect("row-major storage")
    }

    /// All pairwise squared distances; the fitting loop looks distances up
    /// here instead of recomputing them every sweep.
    pub(crate) fn pairwise_squared(&self) -> Array2<f64> {
        let n = self.n_units();
        let mut d = Array2::zeros((n, n));
        for a in 0..n {
            for b in (a + 1)..n {
                let v = squared_euclidean(self.row(a), self.row(b)).expect("equal row lengths");
                d[[a, b]] = v;
                d[[b, a]] = v;
            }
        }
        d
    }
}

/// `sum_i (x_i - y_i)^2`.
pub fn squared_euclidean(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "attribute rows of length {} and {}",
            x.len(),
            y.len()
        )));
    }
    Ok(x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum())
}

/// Indices of the prototype units, one per cluster, pairwise distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MedoidSet {
    indices: Vec<usize>,
}

impl MedoidSet {
    pub fn new(indices: Vec<usize>, n_units: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(CoreError::InvalidInput("no medoids given".into()));
        }
        let mut seen = vec![false; n_units];
        for &idx in &indices {
            if idx >= n_units {
                return Err(CoreError::InvalidInput(format!(
                    "medoid index {idx} outside 0..{n_units}"
                )));
            }
            if seen[idx] {
                return Err(CoreError::InvalidInput(format!(
                    "medoid index {idx} used twice"
                )));
            }
            seen[idx] = true;
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn n_clusters(&self) -> usize {
        self.indices.len()
    }
}

/// Objective value: `(1-gamma) * sum u d^2 + p * sum u log u` minus half of
/// `gamma` times the partition's fuzzy modularity (self-pairs excluded).
pub fn objective(
    x: &NumericAttributeMatrix,
    b: &ModularityMatrix,
    u: &MembershipMatrix,
    medoids: &MedoidSet,
    cfg: &FitConfig,
) -> Result<f64> {
    check_dims(x, Some(b), u, medoids)?;
    let mut dist_term = 0.0;
    for (c, &med) in medoids.indices().iter().enumerate() {
        for n in 0..x.n_units() {
            dist_term += u.entries()[[n, c]] * squared_euclidean(x.row(n), x.row(med))?;
        }
    }
    let network = offdiag_product(b.entries(), u);
    let modularity = (&network * u.entries()).sum();
    Ok((1.0 - cfg.gamma) * dist_term + cfg.entropy_weight * entropy_term(u)
        - 0.5 * cfg.gamma * modularity)
}

/// One closed-form membership sweep: row-normalized exponentials of
/// `-(1/p) * ((1-gamma) d^2(x_n, x_c) - gamma * sum_{m != n} b_{n,m} u_prev_{m,c})`,
/// computed against the previous memberships.
pub fn update_membership(
    x: &NumericAttributeMatrix,
    b: &ModularityMatrix,
    u_prev: &MembershipMatrix,
    medoids: &MedoidSet,
    cfg: &FitConfig,
) -> Result<MembershipMatrix> {
    check_dims(x, Some(b), u_prev, medoids)?;
    let network = offdiag_product(b.entries(), u_prev);
    let mut exponents = Array2::zeros((x.n_units(), medoids.n_clusters()));
    for (c, &med) in medoids.indices().iter().enumerate() {
        for n in 0..x.n_units() {
            let d2 = squared_euclidean(x.row(n), x.row(med))?;
            exponents[[n, c]] = -((1.0 - cfg.gamma) * d2 - cfg.gamma * network[[n, c]])
                / cfg.entropy_weight;
        }
    }
    Ok(row_softmax(exponents))
}

/// Brute-force medoid re-selection.
///
/// For each cluster, candidates are the units whose argmax membership is
/// that cluster; the winner minimizes the membership-weighted sum of squared
/// distances, ties going to the lowest unit index. A cluster with no argmax
/// members keeps its previous medoid. If the winner is already held by an
/// earlier cluster of this same sweep, the next-best free candidate is
/// taken; a cluster left with no free candidate keeps its previous medoid,
/// or, should that be held too, the lowest-index free unit.
pub fn update_medoids(
    x: &NumericAttributeMatrix,
    u: &MembershipMatrix,
    medoids_prev: &MedoidSet,
) -> Result<MedoidSet> {
    check_dims(x, None, u, medoids_prev)?;
    Ok(update_medoids_with(x.n_units(), u, medoids_prev, |a, b| {
        squared_euclidean(x.row(a), x.row(b)).expect("equal row lengths")
    }))
}

pub(crate) fn initial_medoids(n_clusters: usize) -> MedoidSet {
    MedoidSet {
        indices: (0..n_clusters).collect(),
    }
}

pub(crate) fn update_medoids_with<F: Fn(usize, usize) -> f64>(
    n_units: usize,
    u: &MembershipMatrix,
    medoids_prev: &MedoidSet,
    dist2: F,
) -> MedoidSet {
    let labels = u.argmax_labels();
    let n_clusters = medoids_prev.n_clusters();
    let mut taken = vec![false; n_units];
    let mut next = Vec::with_capacity(n_clusters);

    for c in 0..n_clusters {
        let members: Vec<usize> = (0..n_units).filter(|&n| labels[n] == c).collect();
        let chosen = if members.is_empty() {
            free_or_fallback(medoids_prev.indices()[c], &taken)
        } else {
            let mut ranked: Vec<(f64, usize)> = members
                .iter()
                .map(|&q| {
                    let cost: f64 = (0..n_units).map(|n| u.entries()[[n, c]] * dist2(n, q)).sum();
                    (cost, q)
                })
                .collect();
            ranked.sort_by(|a, b| a.partial_cmp(b).expect("finite costs"));
            match ranked.iter().find(|&&(_, q)| !taken[q]) {
                Some(&(_, q)) => q,
                None => free_or_fallback(medoids_prev.indices()[c], &taken),
            }
        };
        taken[chosen] = true;
        next.push(chosen);
    }
    MedoidSet { indices: next }
}

fn free_or_fallback(preferred: usize, taken: &[bool]) -> usize {
    if !taken[preferred] {
        return preferred;
    }
    taken
        .iter()
        .position(|&t| !t)
        .expect("fewer clusters than units")
}

/// Largest per-unit spread of
/// `log u_{n,c} + (1/p)((1-gamma) d^2(x_n, x_c) - gamma sum_{m != n} b u)`
/// across clusters. At a stationary point of the constrained objective this
/// expression is constant in `c` for every unit, so the gap measures how far
/// a converged membership matrix is from first-order optimality. Requires
/// strictly positive memberships.
pub fn stationarity_gap(
    x: &NumericAttributeMatrix,
    b: &ModularityMatrix,
    u: &MembershipMatrix,
    medoids: &MedoidSet,
    cfg: &FitConfig,
) -> Result<f64> {
    check_dims(x, Some(b), u, medoids)?;
    let network = offdiag_product(b.entries(), u);
    let mut worst: f64 = 0.0;
    for n in 0..x.n_units() {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (c, &med) in medoids.indices().iter().enumerate() {
            let d2 = squared_euclidean(x.row(n), x.row(med))?;
            let g = u.entries()[[n, c]].ln()
                + ((1.0 - cfg.gamma) * d2 - cfg.gamma * network[[n, c]]) / cfg.entropy_weight;
            lo = lo.min(g);
            hi = hi.max(g);
        }
        worst = worst.max(hi - lo);
    }
    Ok(worst)
}

struct MedoidMscModel<'a> {
    x: &'a NumericAttributeMatrix,
    b: &'a ModularityMatrix,
    dist2: &'a Array2<f64>,
    gamma: f64,
    p: f64,
}

impl AlternatingModel for MedoidMscModel<'_> {
    type Proto = MedoidSet;

    fn n_units(&self) -> usize {
        self.x.n_units()
    }

    fn init_prototypes(&self, u: &MembershipMatrix) -> MedoidSet {
        initial_medoids(u.n_clusters())
    }

    fn update_prototypes(&self, u: &MembershipMatrix, prev: &MedoidSet) -> MedoidSet {
        update_medoids_with(self.x.n_units(), u, prev, |a, b| self.dist2[[a, b]])
    }

    fn update_membership(&self, u_prev: &MembershipMatrix, proto: &MedoidSet) -> MembershipMatrix {
        let network = offdiag_product(self.b.entries(), u_prev);
        let mut exponents = Array2::zeros((self.x.n_units(), proto.n_clusters()));
        for (c, &med) in proto.indices().iter().enumerate() {
            for n in 0..self.x.n_units() {
                exponents[[n, c]] = -((1.0 - self.gamma) * self.dist2[[n, med]]
                    - self.gamma * network[[n, c]])
                    / self.p;
            }
        }
        row_softmax(exponents)
    }

    fn objective(&self, u: &MembershipMatrix, proto: &MedoidSet) -> f64 {
        let mut dist_term = 0.0;
        for (c, &med) in proto.indices().iter().enumerate() {
            for n in 0..self.x.n_units() {
                dist_term += u.entries()[[n, c]] * self.dist2[[n, med]];
            }
        }
        let network = offdiag_product(self.b.entries(), u);
        let modularity = (&network * u.entries()).sum();
        (1.0 - self.gamma) * dist_term + self.p * entropy_term(u) - 0.5 * self.gamma * modularity
    }
}

/// Multi-restart alternating fit; returns the restart with the lowest
/// objective.
pub fn fit_fcmd_msc(
    x: &NumericAttributeMatrix,
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
    fit_fcmd_msc_with_modularity(x, &b, cfg)
}

/// Same as [`fit_fcmd_msc`] but reuses an already-built modularity matrix,
/// which grid search relies on.
pub fn fit_fcmd_msc_with_modularity(
    x: &NumericAttributeMatrix,
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
    let dist2 = x.pairwise_squared();
    let model = MedoidMscModel {
        x,
        b,
        dist2: &dist2,
        gamma: cfg.gamma,
        p: cfg.entropy_weight,
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
        prototypes: Prototypes::Medoids(outcome.prototypes),
        objective: outcome.objective,
        n_iterations: outcome.n_iterations,
        converged: outcome.converged,
        restart_index: outcome.restart_index,
    })
}

fn check_dims(
    x: &NumericAttributeMatrix,
    b: Option<&ModularityMatrix>,
    u: &MembershipMatrix,
    medoids: &MedoidSet,
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
    if medoids.n_clusters() != u.n_clusters() {
        return Err(CoreError::DimensionMismatch(format!(
            "{} medoids for {} membership columns",
            medoids.n_clusters(),
            u.n_clusters()
        )));
    }
    if let Some(&bad) = medoids.indices().iter().find(|&&m| m >= x.n_units()) {
        return Err(CoreError::DimensionMismatch(format!(
            "medoid index {bad} outside 0..{}",
            x.n_units()
        )));
    }
    Ok(())
}
