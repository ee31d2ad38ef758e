//! Adjacency-penalty baselines.
//!
//! These replace the modularity term with a penalty on adjacent units placed
//! in different clusters:
//! `(beta/2) * sum_{n,c} u_{n,c} sum_m sum_{c' != c} a_{n,m} u_{m,c'}`.
//! Nothing penalizes grouping non-adjacent units together, so on a connected
//! network a large enough `beta` drives every unit into one cluster. The
//! membership updates follow from the same Lagrangian route as the
//! modularity-corrected fits; with the row-simplex constraint the penalty
//! gradient reduces to `beta * sum_m a_{n,m} (1 - u_{m,c})`.

use ndarray::Array2;

use crate::engine::{entropy_term, row_softmax, AlternatingModel};
use crate::error::{CoreError, Result};
use crate::fit::{FitResult, PenaltyConfig, Prototypes};
use crate::graph::AdjacencyMatrix;
use crate::medoids::{
    initial_medoids, squared_euclidean, update_medoids_with, MedoidSet, NumericAttributeMatrix,
};
use crate::membership::MembershipMatrix;
use crate::modes::{hamming_distance, update_modes, CategoricalAttributeMatrix, ModeSet};

/// Penalty term `(beta/2) * sum_{n,c} u_{n,c} (w_n - (A u)_{n,c})`, the
/// cross-cluster adjacency mass.
fn penalty_term(a: &AdjacencyMatrix, u: &MembershipMatrix, beta: f64) -> f64 {
    let strengths = a.strengths();
    let au = a.entries().dot(u.entries());
    let mut total = 0.0;
    for n in 0..a.n_units() {
        for c in 0..u.n_clusters() {
            total += u.entries()[[n, c]] * (strengths[n] - au[[n, c]]);
        }
    }
    0.5 * beta * total
}

/// Objective of the numeric penalty baseline:
/// `(1-beta) sum u d^2 + p sum u log u` plus the adjacency penalty.
pub fn objective_medoids(
    x: &NumericAttributeMatrix,
    a: &AdjacencyMatrix,
    u: &MembershipMatrix,
    medoids: &MedoidSet,
    cfg: &PenaltyConfig,
) -> Result<f64> {
    if u.n_units() != x.n_units() || a.n_units() != x.n_units() {
        return Err(CoreError::DimensionMismatch(
            "attributes, network and membership must agree on the unit count".into(),
        ));
    }
    let mut dist_term = 0.0;
    for (c, &med) in medoids.indices().iter().enumerate() {
        for n in 0..x.n_units() {
            dist_term += u.entries()[[n, c]] * squared_euclidean(x.row(n), x.row(med))?;
        }
    }
    Ok((1.0 - cfg.beta) * dist_term
        + cfg.entropy_weight * entropy_term(u)
        + penalty_term(a, u, cfg.beta))
}

/// Objective of the categorical penalty baseline. The distance term carries
/// no `(1-beta)` weight; only the penalty scales with `beta`.
pub fn objective_modes(
    x: &CategoricalAttributeMatrix,
    a: &AdjacencyMatrix,
    u: &MembershipMatrix,
    modes: &ModeSet,
    cfg: &PenaltyConfig,
) -> Result<f64> {
    if u.n_units() != x.n_units() || a.n_units() != x.n_units() {
        return Err(CoreError::DimensionMismatch(
            "attributes, network and membership must agree on the unit count".into(),
        ));
    }
    let mut dist_term = 0.0;
    for c in 0..modes.n_clusters() {
        for n in 0..x.n_units() {
            let d = hamming_distance(x.row(n), modes.row(c))? as f64;
            dist_term += u.entries()[[n, c]] * d * d;
        }
    }
    Ok(dist_term + cfg.entropy_weight * entropy_term(u) + penalty_term(a, u, cfg.beta))
}

struct PenaltyMedoidModel<'a> {
    x: &'a NumericAttributeMatrix,
    a: &'a AdjacencyMatrix,
    strengths: ndarray::Array1<f64>,
    dist2: &'a Array2<f64>,
    beta: f64,
    p: f64,
}

impl AlternatingModel for PenaltyMedoidModel<'_> {
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
        let au = self.a.entries().dot(u_prev.entries());
        let mut exponents = Array2::zeros((self.x.n_units(), proto.n_clusters()));
        for (c, &med) in proto.indices().iter().enumerate() {
            for n in 0..self.x.n_units() {
                let cross = self.strengths[n] - au[[n, c]];
                exponents[[n, c]] =
                    -((1.0 - self.beta) * self.dist2[[n, med]] + self.beta * cross) / self.p;
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
        (1.0 - self.beta) * dist_term
            + self.p * entropy_term(u)
            + penalty_term(self.a, u, self.beta)
    }
}

struct PenaltyModeModel<'a> {
    x: &'a CategoricalAttributeMatrix,
    a: &'a AdjacencyMatrix,
    strengths: ndarray::Array1<f64>,
    beta: f64,
    p: f64,
}

impl AlternatingModel for PenaltyModeModel<'_> {
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
        let au = self.a.entries().dot(u_prev.entries());
        let mut exponents = Array2::zeros((self.x.n_units(), proto.n_clusters()));
        for c in 0..proto.n_clusters() {
            for n in 0..self.x.n_units() {
                let d = hamming_distance(self.x.row(n), proto.row(c))
                    .expect("equal row lengths") as f64;
                let cross = self.strengths[n] - au[[n, c]];
                exponents[[n, c]] = -(d * d + self.beta * cross) / self.p;
            }
        }
        row_softmax(exponents)
    }

    fn objective(&self, u: &MembershipMatrix, proto: &ModeSet) -> f64 {
        let mut dist_term = 0.0;
        for c in 0..proto.n_clusters() {
            for n in 0..self.x.n_units() {
                let d = hamming_distance(self.x.row(n), proto.row(c))
                    .expect("equal row lengths") as f64;
                dist_term += u.entries()[[n, c]] * d * d;
            }
        }
        dist_term + self.p * entropy_term(u) + penalty_term(self.a, u, self.beta)
    }
}

/// Numeric penalty baseline fit.
pub fn fit_fcmd_penalty(
    x: &NumericAttributeMatrix,
    a: &AdjacencyMatrix,
    cfg: &PenaltyConfig,
) -> Result<FitResult> {
    if a.n_units() != x.n_units() {
        return Err(CoreError::DimensionMismatch(format!(
            "{} attribute rows but {} network units",
            x.n_units(),
            a.n_units()
        )));
    }
    cfg.validate_for_fit(x.n_units())?;
    let dist2 = x.pairwise_squared();
    let model = PenaltyMedoidModel {
        x,
        a,
        strengths: a.strengths(),
        dist2: &dist2,
        beta: cfg.beta,
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

/// Categorical penalty baseline fit.
pub fn fit_fcmo_penalty(
    x: &CategoricalAttributeMatrix,
    a: &AdjacencyMatrix,
    cfg: &PenaltyConfig,
) -> Result<FitResult> {
    if a.n_units() != x.n_units() {
        return Err(CoreError::DimensionMismatch(format!(
            "{} attribute rows but {} network units",
            x.n_units(),
            a.n_units()
        )));
    }
    cfg.validate_for_fit(x.n_units())?;
    let model = PenaltyModeModel {
        x,
        a,
        strengths: a.strengths(),
        beta: cfg.beta,
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
        prototypes: Prototypes::Modes(outcome.prototypes),
        objective: outcome.objective,
        n_iterations: outcome.n_iterations,
        converged: outcome.converged,
        restart_index: outcome.restart_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::FitConfig;
    use crate::medoids::fit_fcmd_msc;
    use crate::modes::{fit_fcmo_msc, Domain};
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    fn domains(n_attrs: usize, categories: &[&str]) -> Vec<Domain> {
        (0..n_attrs)
            .map(|i| Domain {
                name: format!("a{}", i + 1),
                categories: categories.iter().map(|s| s.to_string()).collect(),
            })
            .collect()
    }

    #[test]
    fn beta_zero_matches_gamma_zero_medoid_fit() {
        let x = NumericAttributeMatrix::new(array![
            [0.0, 0.1],
            [0.4, 0.0],
            [0.2, 0.5],
            [3.0, 3.2],
            [3.4, 2.9],
            [2.8, 3.1]
        ])
        .unwrap();
        let a = AdjacencyMatrix::from_edges(
            6,
            &[(0, 1, 1.0), (1, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (2, 3, 1.0)],
        )
        .unwrap();
        let penalty_cfg = PenaltyConfig {
            n_clusters: 2,
            beta: 0.0,
            entropy_weight: 0.5,
            n_restarts: 4,
            seed: 77,
            ..PenaltyConfig::default()
        };
        let msc_cfg = FitConfig {
            n_clusters: 2,
            gamma: 0.0,
            entropy_weight: 0.5,
            n_restarts: 4,
            seed: 77,
            ..FitConfig::default()
        };
        let pen = fit_fcmd_penalty(&x, &a, &penalty_cfg).unwrap();
        let msc = fit_fcmd_msc(&x, &a, &msc_cfg).unwrap();
        assert_eq!(pen.membership.entries(), msc.membership.entries());
        assert_eq!(
            pen.prototypes.as_medoids().unwrap(),
            msc.prototypes.as_medoids().unwrap()
        );
    }

    #[test]
    fn beta_zero_matches_gamma_zero_mode_fit() {
        let x = CategoricalAttributeMatrix::new(
            array![[0u32, 0, 1], [0, 0, 0], [0, 1, 0], [1, 1, 1], [1, 0, 1], [1, 1, 0]],
            domains(3, &["A", "B"]),
        )
        .unwrap();
        let a = AdjacencyMatrix::from_edges(
            6,
            &[(0, 1, 1.0), (1, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (2, 3, 1.0)],
        )
        .unwrap();
        let pen = fit_fcmo_penalty(
            &x,
            &a,
            &PenaltyConfig {
                n_clusters: 2,
                beta: 0.0,
                entropy_weight: 0.8,
                n_restarts: 4,
                seed: 12,
                ..PenaltyConfig::default()
            },
        )
        .unwrap();
        let msc = fit_fcmo_msc(
            &x,
            &a,
            &FitConfig {
                n_clusters: 2,
                gamma: 0.0,
                entropy_weight: 0.8,
                n_restarts: 4,
                seed: 12,
                ..FitConfig::default()
            },
        )
        .unwrap();
        assert_eq!(pen.membership.entries(), msc.membership.entries());
    }

    #[test]
    fn medoid_objective_matches_naive_evaluator() {
        let x = NumericAttributeMatrix::new(array![
            [0.0, 0.5],
            [1.0, 0.0],
            [2.5, 1.5],
            [0.5, 2.0],
            [1.5, 1.0]
        ])
        .unwrap();
        let a = AdjacencyMatrix::from_edges(
            5,
            &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (0, 4, 1.0)],
        )
        .unwrap();
        let mut rng = crate::seed::restart_rng(8, 0);
        let u = MembershipMatrix::random_simplex(5, 2, &mut rng);
        let medoids = MedoidSet::new(vec![0, 2], 5).unwrap();
        let cfg = PenaltyConfig {
            beta: 0.6,
            entropy_weight: 0.7,
            ..PenaltyConfig::default()
        };

        let mut expected = 0.0;
        for n in 0..5 {
            for c in 0..2 {
                let med = medoids.indices()[c];
                let mut d2 = 0.0;
                for i in 0..2 {
                    d2 += (x.entries()[[n, i]] - x.entries()[[med, i]]).powi(2);
                }
                expected += 0.4 * u.entries()[[n, c]] * d2;
                expected += 0.7 * u.entries()[[n, c]] * u.entries()[[n, c]].ln();
                for m in 0..5 {
                    for c_other in 0..2 {
                        if c_other != c {
                            expected += 0.5
                                * 0.6
                                * u.entries()[[n, c]]
                                * a.entries()[[n, m]]
                                * u.entries()[[m, c_other]];
                        }
                    }
                }
            }
        }
        assert_abs_diff_eq!(
            objective_medoids(&x, &a, &u, &medoids, &cfg).unwrap(),
            expected,
            epsilon = 1e-10
        );
    }

    #[test]
    fn mode_objective_matches_naive_evaluator() {
        let x = CategoricalAttributeMatrix::new(
            array![[0u32, 1], [1, 1], [0, 0], [1, 0], [0, 1]],
            domains(2, &["A", "B"]),
        )
        .unwrap();
        let a =
            AdjacencyMatrix::from_edges(5, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)])
                .unwrap();
        let mut rng = crate::seed::restart_rng(14, 0);
        let u = MembershipMatrix::random_simplex(5, 2, &mut rng);
        let modes = ModeSet::new(array![[0u32, 1], [1, 0]], x.domains()).unwrap();
        let cfg = PenaltyConfig {
            beta: 0.4,
            entropy_weight: 0.9,
            ..PenaltyConfig::default()
        };

        let mut expected = 0.0;
        for n in 0..5 {
            for c in 0..2 {
                let mut d = 0.0;
                for i in 0..2 {
                    if x.entries()[[n, i]] != modes.entries()[[c, i]] {
                        d += 1.0;
                    }
                }
                expected += u.entries()[[n, c]] * d * d;
                expected += 0.9 * u.entries()[[n, c]] * u.entries()[[n, c]].ln();
                for m in 0..5 {
                    for c_other in 0..2 {
                        if c_other != c {
                            expected += 0.5
                                * 0.4
                                * u.entries()[[n, c]]
                                * a.entries()[[n, m]]
                                * u.entries()[[m, c_other]];
                        }
                    }
                }
            }
        }
        assert_abs_diff_eq!(
            objective_modes(&x, &a, &u, &modes, &cfg).unwrap(),
            expected,
            epsilon = 1e-10
        );
    }

    #[test]
    fn dense_graph_collapses_under_large_beta() {
        // Two attribute groups, but a complete graph: with beta high the
        // cross-cluster penalty dominates and one cluster absorbs everything.
        let x = NumericAttributeMatrix::new(array![
            [0.0, 0.0],
            [0.3, 0.1],
            [0.1, 0.4],
            [5.0, 5.0],
            [5.2, 4.9],
            [4.8, 5.1]
        ])
        .unwrap();
        let mut edges = Vec::new();
        for n in 0..6 {
            for m in (n + 1)..6 {
                edges.push((n, m, 1.0));
            }
        }
        let a = AdjacencyMatrix::from_edges(6, &edges).unwrap();
        let cfg = PenaltyConfig {
            n_clusters: 2,
            beta: 0.95,
            entropy_weight: 0.5,
            n_restarts: 4,
            seed: 3,
            ..PenaltyConfig::default()
        };
        let fit = fit_fcmd_penalty(&x, &a, &cfg).unwrap();
        let labels = fit.membership.argmax_labels();
        assert!(labels.iter().all(|&l| l == labels[0]));
    }
}
