//! Validity index, grid search over `(C, gamma)`, and crisp assignment.

use rayon::prelude::*;

use crate::error::{CoreError, Result};
use crate::fit::{FitConfig, FitResult};
use crate::graph::{fuzzy_modularity, AdjacencyMatrix, ModularityMatrix};
use crate::medoids::{fit_fcmd_msc_with_modularity, squared_euclidean, NumericAttributeMatrix};
use crate::membership::MembershipMatrix;
use crate::modes::{fit_fcmo_msc_with_modularity, hamming_distance, CategoricalAttributeMatrix};
use crate::seed::cell_seed;

/// Options shared by both validity indices.
#[derive(Debug, Clone, Copy, Default, serde::Serialize, serde::Deserialize)]
pub struct ValidityOptions {
    /// Include the `n = m` terms in the modularity sum of the numerator.
    /// Excluded by default, consistent with the fuzzy-modularity definition.
    #[serde(default)]
    pub include_self_pairs: bool,
}

fn modularity_sum(b: &ModularityMatrix, u: &MembershipMatrix, opts: &ValidityOptions) -> f64 {
    let mut q = fuzzy_modularity(b, u).expect("dimensions checked by caller");
    if opts.include_self_pairs {
        for n in 0..b.n_units() {
            let row_sq: f64 = (0..u.n_clusters())
                .map(|c| u.entries()[[n, c]] * u.entries()[[n, c]])
                .sum();
            q += b.entries()[[n, n]] * row_sq;
        }
    }
    q
}

fn scale_factor(n_units: usize, n_clusters: usize) -> f64 {
    (n_units - n_clusters) as f64 / n_clusters as f64
}

/// Validity of a medoid fit:
/// `(N-C)/C * (min squared medoid separation + modularity sum) / (sum u d^2)`.
/// Higher is better; the value can go negative when the partition's fuzzy
/// modularity is negative. A zero denominator (every unit sitting on its
/// medoid) is reported as [`CoreError::ZeroCompactness`].
pub fn validity_medoids(
    result: &FitResult,
    x: &NumericAttributeMatrix,
    b: &ModularityMatrix,
    opts: &ValidityOptions,
) -> Result<f64> {
    let medoids = result.prototypes.as_medoids().ok_or_else(|| {
        CoreError::InvalidConfig("validity over medoids needs a medoid fit".into())
    })?;
    let u = &result.membership;
    let c_count = u.n_clusters();
    if c_count < 2 {
        return Err(CoreError::InvalidConfig(
            "the validity index needs at least 2 clusters".into(),
        ));
    }
    if u.n_units() != x.n_units() || b.n_units() != x.n_units() {
        return Err(CoreError::DimensionMismatch(
            "attributes, network and membership must agree on the unit count".into(),
        ));
    }

    let mut min_sep = f64::INFINITY;
    for i in 0..c_count {
        for j in (i + 1)..c_count {
            let d = squared_euclidean(
                x.row(medoids.indices()[i]),
                x.row(medoids.indices()[j]),
            )?;
            min_sep = min_sep.min(d);
        }
    }

    let mut compactness = 0.0;
    for (c, &med) in medoids.indices().iter().enumerate() {
        for n in 0..x.n_units() {
            compactness += u.entries()[[n, c]] * squared_euclidean(x.row(n), x.row(med))?;
        }
    }
    if compactness == 0.0 {
        return Err(CoreError::ZeroCompactness);
    }
    let q = modularity_sum(b, u, opts);
    Ok(scale_factor(x.n_units(), c_count) * (min_sep + q) / compactness)
}

/// Validity of a mode fit; as [`validity_medoids`] with squared Hamming
/// distances between modes (numerator) and to modes (denominator).
pub fn validity_modes(
    result: &FitResult,
    x: &CategoricalAttributeMatrix,
    b: &ModularityMatrix,
    opts: &ValidityOptions,
) -> Result<f64> {
    let modes = result
        .prototypes
        .as_modes()
        .ok_or_else(|| CoreError::InvalidConfig("validity over modes needs a mode fit".into()))?;
    let u = &result.membership;
    let c_count = u.n_clusters();
    if c_count < 2 {
        return Err(CoreError::InvalidConfig(
            "the validity index needs at least 2 clusters".into(),
        ));
    }
    if u.n_units() != x.n_units() || b.n_units() != x.n_units() {
        return Err(CoreError::DimensionMismatch(
            "attributes, network and membership must agree on the unit count".into(),
        ));
    }

    let mut min_sep = f64::INFINITY;
    for i in 0..c_count {
        for j in (i + 1)..c_count {
            let d = hamming_distance(modes.row(i), modes.row(j))? as f64;
            min_sep = min_sep.min(d * d);
        }
    }

    let mut compactness = 0.0;
    for c in 0..c_count {
        for n in 0..x.n_units() {
            let d = hamming_distance(x.row(n), modes.row(c))? as f64;
            compactness += u.entries()[[n, c]] * d * d;
        }
    }
    if compactness == 0.0 {
        return Err(CoreError::ZeroCompactness);
    }
    let q = modularity_sum(b, u, opts);
    Ok(scale_factor(x.n_units(), c_count) * (min_sep + q) / compactness)
}

/// Grid of validity values over `(C, gamma)`, row-major in C.
///
/// A cell holds `None` when its fit failed, `+inf` when the index was
/// degenerate (zero compactness); both are skipped by [`Self::argmax`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidityTable {
    pub c_values: Vec<usize>,
    pub gamma_values: Vec<f64>,
    pub cells: Vec<Option<f64>>,
}

impl ValidityTable {
    pub fn new(c_values: Vec<usize>, gamma_values: Vec<f64>, cells: Vec<Option<f64>>) -> Self {
        assert_eq!(cells.len(), c_values.len() * gamma_values.len());
        Self {
            c_values,
            gamma_values,
            cells,
        }
    }

    pub fn get(&self, c_idx: usize, gamma_idx: usize) -> Option<f64> {
        self.cells[c_idx * self.gamma_values.len() + gamma_idx]
    }

    /// Indices of the cell with the highest finite validity; ties go to the
    /// smallest C, then the smallest gamma.
    pub fn argmax(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for c_idx in 0..self.c_values.len() {
            for g_idx in 0..self.gamma_values.len() {
                if let Some(v) = self.get(c_idx, g_idx) {
                    if v.is_finite() && best.map_or(true, |(_, _, bv)| v > bv) {
                        best = Some((c_idx, g_idx, v));
                    }
                }
            }
        }
        best.map(|(c, g, _)| (c, g))
    }

    /// The argmax cell as `(C, gamma, value)`.
    pub fn best(&self) -> Option<(usize, f64, f64)> {
        self.argmax().map(|(c_idx, g_idx)| {
            (
                self.c_values[c_idx],
                self.gamma_values[g_idx],
                self.get(c_idx, g_idx).expect("argmax cell is present"),
            )
        })
    }
}

/// Grid-search protocol: which cells to fit and with what shared settings.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub c_values: Vec<usize>,
    pub gamma_values: Vec<f64>,
    pub entropy_weight: f64,
    pub max_iter: usize,
    pub conv_tol: f64,
    pub n_restarts: usize,
    pub seed: u64,
    #[serde(default)]
    pub unweighted_attr_update: bool,
    #[serde(default)]
    pub validity: ValidityOptions,
}

impl GridSpec {
    fn validate(&self) -> Result<()> {
        if self.c_values.is_empty() || self.gamma_values.is_empty() {
            return Err(CoreError::InvalidConfig(
                "the grid needs at least one C and one gamma value".into(),
            ));
        }
        if let Some(&c) = self.c_values.iter().find(|&&c| c < 2) {
            return Err(CoreError::InvalidConfig(format!(
                "grid C value {c} is below 2"
            )));
        }
        if let Some(&g) = self
            .gamma_values
            .iter()
            .find(|&&g| !(0.0..=1.0).contains(&g))
        {
            return Err(CoreError::InvalidConfig(format!(
                "grid gamma value {g} lies outside [0, 1]"
            )));
        }
        Ok(())
    }

    fn cell_config(&self, n_clusters: usize, gamma: f64) -> FitConfig {
        FitConfig {
            n_clusters,
            gamma,
            entropy_weight: self.entropy_weight,
            max_iter: self.max_iter,
            conv_tol: self.conv_tol,
            n_restarts: self.n_restarts,
            seed: cell_seed(self.seed, n_clusters, gamma),
            unweighted_attr_update: self.unweighted_attr_update,
        }
    }
}

/// What happened in one grid cell.
#[derive(Debug, Clone)]
pub enum CellOutcome {
    Fitted { fit: FitResult, validity: f64 },
    Degenerate { fit: FitResult },
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct GridCell {
    pub n_clusters: usize,
    pub gamma: f64,
    pub seed: u64,
    pub outcome: CellOutcome,
}

#[derive(Debug, Clone)]
pub struct GridResult {
    pub table: ValidityTable,
    pub cells: Vec<GridCell>,
    /// `(C, gamma, validity)` of the best cell, when any cell is finite.
    pub best: Option<(usize, f64, f64)>,
}

impl GridResult {
    pub fn best_fit(&self) -> Option<(&GridCell, &FitResult)> {
        let (c, gamma, _) = self.best?;
        self.cells
            .iter()
            .find(|cell| cell.n_clusters == c && cell.gamma == gamma)
            .and_then(|cell| match &cell.outcome {
                CellOutcome::Fitted { fit, .. } => Some((cell, fit)),
                _ => None,
            })
    }
}

fn assemble_grid(spec: &GridSpec, cells: Vec<GridCell>) -> GridResult {
    let values = cells
        .iter()
        .map(|cell| match &cell.outcome {
            CellOutcome::Fitted { validity, .. } => Some(*validity),
            CellOutcome::Degenerate { .. } => Some(f64::INFINITY),
            CellOutcome::Failed(_) => None,
        })
        .collect();
    let table = ValidityTable::new(spec.c_values.clone(), spec.gamma_values.clone(), values);
    let best = table.best();
    GridResult { table, cells, best }
}

/// Fits every `(C, gamma)` cell of the grid with the medoid algorithm and
/// scores it; failed cells are recorded and skipped, never fatal. Cells get
/// seeds derived from `(spec.seed, C, gamma)`, so the result does not depend
/// on evaluation order.
pub fn grid_search_medoids(
    x: &NumericAttributeMatrix,
    a: &AdjacencyMatrix,
    spec: &GridSpec,
) -> Result<GridResult> {
    spec.validate()?;
    let b = ModularityMatrix::from_adjacency(a)?;
    let pairs: Vec<(usize, f64)> = spec
        .c_values
        .iter()
        .flat_map(|&c| spec.gamma_values.iter().map(move |&g| (c, g)))
        .collect();
    let cells: Vec<GridCell> = pairs
        .into_par_iter()
        .map(|(c, gamma)| {
            let cfg = spec.cell_config(c, gamma);
            let seed = cfg.seed;
            let outcome = match fit_fcmd_msc_with_modularity(x, &b, &cfg) {
                Ok(fit) => match validity_medoids(&fit, x, &b, &spec.validity) {
                    Ok(validity) => CellOutcome::Fitted { fit, validity },
                    Err(CoreError::ZeroCompactness) => CellOutcome::Degenerate { fit },
                    Err(e) => CellOutcome::Failed(e.to_string()),
                },
                Err(e) => CellOutcome::Failed(e.to_string()),
            };
            GridCell {
                n_clusters: c,
                gamma,
                seed,
                outcome,
            }
        })
        .collect();
    Ok(assemble_grid(spec, cells))
}

/// Mode-algorithm counterpart of [`grid_search_medoids`].
pub fn grid_search_modes(
    x: &CategoricalAttributeMatrix,
    a: &AdjacencyMatrix,
    spec: &GridSpec,
) -> Result<GridResult> {
    spec.validate()?;
    let b = ModularityMatrix::from_adjacency(a)?;
    let pairs: Vec<(usize, f64)> = spec
        .c_values
        .iter()
        .flat_map(|&c| spec.gamma_values.iter().map(move |&g| (c, g)))
        .collect();
    let cells: Vec<GridCell> = pairs
        .into_par_iter()
        .map(|(c, gamma)| {
            let cfg = spec.cell_config(c, gamma);
            let seed = cfg.seed;
            let outcome = match fit_fcmo_msc_with_modularity(x, &b, &cfg) {
                Ok(fit) => match validity_modes(&fit, x, &b, &spec.validity) {
                    Ok(validity) => CellOutcome::Fitted { fit, validity },
                    Err(CoreError::ZeroCompactness) => CellOutcome::Degenerate { fit },
                    Err(e) => CellOutcome::Failed(e.to_string()),
                },
                Err(e) => CellOutcome::Failed(e.to_string()),
            };
            GridCell {
                n_clusters: c,
                gamma,
                seed,
                outcome,
            }
        })
        .collect();
    Ok(assemble_grid(spec, cells))
}

/// How the membership cutoff is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CutoffRule {
    /// A unit is crisp when its top membership is `>=` the cutoff
    /// (cutoff in `(0.5, 1]`, so at most one cluster can qualify).
    GreaterOrEqual,
    /// A unit is crisp only when its top membership strictly exceeds the
    /// cutoff (cutoff in `(1/C, 1]`).
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrispLabel {
    /// Zero-based cluster index.
    Cluster(usize),
    Fuzzy,
}

#[derive(Debug, Clone)]
pub struct CrispPartition {
    pub labels: Vec<CrispLabel>,
    pub cutoff: f64,
    pub rule: CutoffRule,
}

/// Hardens a fuzzy partition: each unit gets its argmax cluster when the top
/// membership passes the rule, and is declared fuzzy otherwise.
pub fn crisp_assign(u: &MembershipMatrix, cutoff: f64, rule: CutoffRule) -> Result<CrispPartition> {
    match rule {
        CutoffRule::GreaterOrEqual => {
            if !(cutoff > 0.5 && cutoff <= 1.0) {
                return Err(CoreError::InvalidConfig(format!(
                    "cutoff {cutoff} must lie in (0.5, 1] for the >= rule"
                )));
            }
        }
        CutoffRule::Strict => {
            let floor = 1.0 / u.n_clusters() as f64;
            if !(cutoff > floor && cutoff <= 1.0) {
                return Err(CoreError::InvalidConfig(format!(
                    "cutoff {cutoff} must lie in (1/{}, 1] for the strict rule",
                    u.n_clusters()
                )));
            }
        }
    }
    let labels = u
        .argmax_labels()
        .into_iter()
        .enumerate()
        .map(|(n, c)| {
            let top = u.entries()[[n, c]];
            let crisp = match rule {
                CutoffRule::GreaterOrEqual => top >= cutoff,
                CutoffRule::Strict => top > cutoff,
            };
            if crisp {
                CrispLabel::Cluster(c)
            } else {
                CrispLabel::Fuzzy
            }
        })
        .collect();
    Ok(CrispPartition {
        labels,
        cutoff,
        rule,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::Prototypes;
    use crate::medoids::MedoidSet;
    use crate::modes::{Domain, ModeSet};
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    fn fit_result(u: MembershipMatrix, prototypes: Prototypes) -> FitResult {
        FitResult {
            membership: u,
            prototypes,
            objective: 0.0,
            n_iterations: 1,
            converged: true,
            restart_index: 0,
        }
    }

    fn path_modularity(n: usize) -> ModularityMatrix {
        let edges: Vec<(usize, usize, f64)> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
        ModularityMatrix::from_adjacency(&AdjacencyMatrix::from_edges(n, &edges).unwrap()).unwrap()
    }

    #[test]
    fn coincident_units_trigger_zero_compactness() {
        let x = NumericAttributeMatrix::new(array![[0.0, 0.0], [1.0, 1.0]]).unwrap();
        let b = path_modularity(2);
        let u = MembershipMatrix::new(array![[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let result = fit_result(
            u,
            Prototypes::Medoids(MedoidSet::new(vec![0, 1], 2).unwrap()),
        );
        assert!(matches!(
            validity_medoids(&result, &x, &b, &ValidityOptions::default()),
            Err(CoreError::ZeroCompactness)
        ));
    }

    #[test]
    fn medoid_validity_matches_naive_evaluation() {
        let x = NumericAttributeMatrix::new(array![
            [0.0, 0.0],
            [1.0, 0.0],
            [4.0, 3.0],
            [5.0, 3.0]
        ])
        .unwrap();
        let b = path_modularity(4);
        let u = MembershipMatrix::new(array![
            [0.9, 0.1],
            [0.8, 0.2],
            [0.2, 0.8],
            [0.1, 0.9]
        ])
        .unwrap();
        let medoids = MedoidSet::new(vec![0, 3], 4).unwrap();
        let result = fit_result(u.clone(), Prototypes::Medoids(medoids.clone()));
        let value = validity_medoids(&result, &x, &b, &ValidityOptions::default()).unwrap();

        let d2 = |a: usize, q: usize| -> f64 {
            (x.entries()[[a, 0]] - x.entries()[[q, 0]]).powi(2)
                + (x.entries()[[a, 1]] - x.entries()[[q, 1]]).powi(2)
        };
        let min_sep = d2(0, 3);
        let mut q_sum = 0.0;
        for n in 0..4 {
            for m in 0..4 {
                if n != m {
                    for c in 0..2 {
                        q_sum += u.entries()[[n, c]] * b.entries()[[n, m]] * u.entries()[[m, c]];
                    }
                }
            }
        }
        let mut compact = 0.0;
        for n in 0..4 {
            compact += u.entries()[[n, 0]] * d2(n, 0) + u.entries()[[n, 1]] * d2(n, 3);
        }
        let expected = ((4.0 - 2.0) / 2.0) * (min_sep + q_sum) / compact;
        assert_abs_diff_eq!(value, expected, epsilon = 1e-12);
    }

    #[test]
    fn self_pair_option_shifts_the_modularity_sum() {
        let x = NumericAttributeMatrix::new(array![[0.0], [1.0], [5.0]]).unwrap();
        let b = path_modularity(3);
        let u = MembershipMatrix::new(array![[0.8, 0.2], [0.7, 0.3], [0.1, 0.9]]).unwrap();
        let medoids = MedoidSet::new(vec![0, 2], 3).unwrap();
        let result = fit_result(u.clone(), Prototypes::Medoids(medoids));

        let base = validity_medoids(&result, &x, &b, &ValidityOptions::default()).unwrap();
        let with_self = validity_medoids(
            &result,
            &x,
            &b,
            &ValidityOptions {
                include_self_pairs: true,
            },
        )
        .unwrap();

        let mut diag = 0.0;
        for n in 0..3 {
            for c in 0..2 {
                diag += b.entries()[[n, n]] * u.entries()[[n, c]].powi(2);
            }
        }
        let mut compact = 0.0;
        for n in 0..3 {
            compact += u.entries()[[n, 0]] * (x.entries()[[n, 0]] - 0.0).powi(2)
                + u.entries()[[n, 1]] * (x.entries()[[n, 0]] - 5.0).powi(2);
        }
        assert_abs_diff_eq!(
            with_self - base,
            (0.5) * diag / compact,
            epsilon = 1e-12
        );
    }

    #[test]
    fn identical_modes_zero_the_separation_term() {
        let domains = vec![
            Domain {
                name: "a1".into(),
                categories: vec!["A".into(), "B".into()],
            },
            Domain {
                name: "a2".into(),
                categories: vec!["A".into(), "B".into()],
            },
        ];
        let x = CategoricalAttributeMatrix::new(
            array![[0u32, 0], [0, 1], [1, 0], [1, 1]],
            domains.clone(),
        )
        .unwrap();
        let b = path_modularity(4);
        let u = MembershipMatrix::uniform(4, 2);
        let modes = ModeSet::new(array![[0u32, 0], [0, 0]], &domains).unwrap();
        let result = fit_result(u.clone(), Prototypes::Modes(modes.clone()));
        let value = validity_modes(&result, &x, &b, &ValidityOptions::default()).unwrap();

        // Separation is zero, so only the modularity sum feeds the numerator.
        let q = crate::graph::fuzzy_modularity(&b, &u).unwrap();
        let mut compact = 0.0;
        for n in 0..4 {
            for c in 0..2 {
                let d = hamming_distance(x.row(n), modes.row(c)).unwrap() as f64;
                compact += u.entries()[[n, c]] * d * d;
            }
        }
        assert_abs_diff_eq!(value, (0.0 + q) / compact, epsilon = 1e-12);
    }

    #[test]
    fn mode_validity_matches_naive_evaluation() {
        let domains: Vec<Domain> = (0..3)
            .map(|i| Domain {
                name: format!("a{i}"),
                categories: vec!["A".into(), "B".into(), "C".into()],
            })
            .collect();
        let x = CategoricalAttributeMatrix::new(
            array![[0u32, 1, 2], [0, 1, 1], [2, 2, 0], [2, 0, 0]],
            domains.clone(),
        )
        .unwrap();
        let b = path_modularity(4);
        let u = MembershipMatrix::new(array![
            [0.7, 0.3],
            [0.9, 0.1],
            [0.2, 0.8],
            [0.4, 0.6]
        ])
        .unwrap();
        let modes = ModeSet::new(array![[0u32, 1, 1], [2, 0, 0]], &domains).unwrap();
        let result = fit_result(u.clone(), Prototypes::Modes(modes.clone()));
        let value = validity_modes(&result, &x, &b, &ValidityOptions::default()).unwrap();

        let ham = |a: &[u32], q: &[u32]| -> f64 {
            a.iter().zip(q).filter(|(v, w)| v != w).count() as f64
        };
        let min_sep = ham(modes.row(0), modes.row(1)).powi(2);
        let mut q_sum = 0.0;
        for n in 0..4 {
            for m in 0..4 {
                if n != m {
                    for c in 0..2 {
                        q_sum += u.entries()[[n, c]] * b.entries()[[n, m]] * u.entries()[[m, c]];
                    }
                }
            }
        }
        let mut compact = 0.0;
        for n in 0..4 {
            compact += u.entries()[[n, 0]] * ham(x.row(n), modes.row(0)).powi(2)
                + u.entries()[[n, 1]] * ham(x.row(n), modes.row(1)).powi(2);
        }
        let expected = ((4.0 - 2.0) / 2.0) * (min_sep + q_sum) / compact;
        assert_abs_diff_eq!(value, expected, epsilon = 1e-12);
    }

    #[test]
    fn table_argmax_breaks_ties_toward_small_c_and_gamma() {
        let table = ValidityTable::new(
            vec![2, 3],
            vec![0.0, 0.1, 0.2],
            vec![
                Some(1.0),
                Some(5.0),
                Some(5.0),
                Some(5.0),
                Some(2.0),
                None,
            ],
        );
        assert_eq!(table.argmax(), Some((0, 1)));
        assert_eq!(table.best(), Some((2, 0.1, 5.0)));
    }

    #[test]
    fn table_argmax_skips_degenerate_and_missing_cells() {
        let table = ValidityTable::new(
            vec![2, 3],
            vec![0.0, 0.1],
            vec![Some(f64::INFINITY), None, Some(3.0), Some(1.0)],
        );
        assert_eq!(table.best(), Some((3, 0.0, 3.0)));
    }

    #[test]
    fn single_cell_grid_selects_that_cell() {
        let x = NumericAttributeMatrix::new(array![
            [0.0, 0.0],
            [0.4, 0.1],
            [5.0, 5.0],
            [5.3, 4.8]
        ])
        .unwrap();
        let a = AdjacencyMatrix::from_edges(4, &[(0, 1, 1.0), (2, 3, 1.0), (1, 2, 1.0)]).unwrap();
        let spec = GridSpec {
            c_values: vec![2],
            gamma_values: vec![0.2],
            entropy_weight: 0.5,
            max_iter: 500,
            conv_tol: 1e-9,
            n_restarts: 3,
            seed: 42,
            unweighted_attr_update: false,
            validity: ValidityOptions::default(),
        };
        let grid = grid_search_medoids(&x, &a, &spec).unwrap();
        let (c, gamma, _) = grid.best.unwrap();
        assert_eq!((c, gamma), (2, 0.2));
        assert!(grid.best_fit().is_some());
    }

    #[test]
    fn grid_search_is_deterministic() {
        let x = NumericAttributeMatrix::new(array![
            [0.0, 0.0],
            [0.4, 0.1],
            [0.3, 0.5],
            [5.0, 5.0],
            [5.3, 4.8],
            [4.7, 5.2]
        ])
        .unwrap();
        let a = AdjacencyMatrix::from_edges(
            6,
            &[(0, 1, 1.0), (1, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (2, 3, 1.0)],
        )
        .unwrap();
        let spec = GridSpec {
            c_values: vec![2, 3],
            gamma_values: vec![0.0, 0.3],
            entropy_weight: 0.5,
            max_iter: 300,
            conv_tol: 1e-9,
            n_restarts: 4,
            seed: 7,
            unweighted_attr_update: false,
            validity: ValidityOptions::default(),
        };
        let g1 = grid_search_medoids(&x, &a, &spec).unwrap();
        let g2 = grid_search_medoids(&x, &a, &spec).unwrap();
        assert_eq!(g1.table, g2.table);
        assert_eq!(g1.best, g2.best);
    }

    #[test]
    fn crisp_rules_follow_the_cutoff() {
        let u = MembershipMatrix::new(array![
            [0.9, 0.1],
            [0.66, 0.34],
            [0.70, 0.30],
            [0.30, 0.70]
        ])
        .unwrap();
        let part = crisp_assign(&u, 0.7, CutoffRule::GreaterOrEqual).unwrap();
        assert_eq!(part.labels[0], CrispLabel::Cluster(0));
        assert_eq!(part.labels[1], CrispLabel::Fuzzy);
        assert_eq!(part.labels[2], CrispLabel::Cluster(0));
        assert_eq!(part.labels[3], CrispLabel::Cluster(1));
    }

    #[test]
    fn near_cutoff_membership_stays_fuzzy() {
        let u = MembershipMatrix::new(array![[0.303, 0.697]]).unwrap();
        let part = crisp_assign(&u, 0.7, CutoffRule::GreaterOrEqual).unwrap();
        assert_eq!(part.labels[0], CrispLabel::Fuzzy);
    }

    #[test]
    fn strict_rule_excludes_the_boundary() {
        let u = MembershipMatrix::new(array![[0.6, 0.3, 0.1], [0.61, 0.29, 0.1]]).unwrap();
        let part = crisp_assign(&u, 0.6, CutoffRule::Strict).unwrap();
        assert_eq!(part.labels[0], CrispLabel::Fuzzy);
        assert_eq!(part.labels[1], CrispLabel::Cluster(0));
    }

    #[test]
    fn cutoff_ranges_are_validated() {
        let u = MembershipMatrix::uniform(2, 2);
        assert!(crisp_assign(&u, 0.5, CutoffRule::GreaterOrEqual).is_err());
        assert!(crisp_assign(&u, 1.01, CutoffRule::GreaterOrEqual).is_err());
        assert!(crisp_assign(&u, 0.5, CutoffRule::Strict).is_err());
        assert!(crisp_assign(&u, 0.51, CutoffRule::Strict).is_ok());
    }
}
