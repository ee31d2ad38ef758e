//! Network representation, the modularity matrix, and fuzzy modularity.

use ndarray::{Array1, Array2};

use crate::error::{CoreError, Result};
use crate::membership::MembershipMatrix;

/// Symmetric non-negative connection matrix with a zero diagonal.
///
/// Entries are 0/1 for a plain graph or arbitrary non-negative strengths for
/// a weighted one. The all-zero matrix is representable (generators can emit
/// an empty graph); it is rejected only when a [`ModularityMatrix`] is built
/// from it.
#[derive(Debug, Clone)]
pub struct AdjacencyMatrix {
    entries: Array2<f64>,
}

impl AdjacencyMatrix {
    pub fn from_dense(entries: Array2<f64>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(CoreError::DimensionMismatch(format!(
                "adjacency matrix must be square, got {rows}x{cols}"
            )));
        }
        if rows == 0 {
            return Err(CoreError::InvalidInput("adjacency matrix is empty".into()));
        }
        for n in 0..rows {
            if entries[[n, n]] != 0.0 {
                return Err(CoreError::InvalidInput(format!(
                    "self-connection on unit {n}: diagonal must be zero"
                )));
            }
            for m in 0..cols {
                let v = entries[[n, m]];
                if !v.is_finite() || v < 0.0 {
                    return Err(CoreError::InvalidInput(format!(
                        "connection strength ({n},{m}) = {v} is not a finite non-negative number"
                    )));
                }
                if entries[[n, m]] != entries[[m, n]] {
                    return Err(CoreError::AsymmetricAdjacency(format!(
                        "entry ({n},{m}) = {} but ({m},{n}) = {}",
                        entries[[n, m]],
                        entries[[m, n]]
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    /// Builds the matrix from undirected edges over units `0..n_units`.
    ///
    /// Listing an edge in both directions (or twice) is accepted as long as
    /// the weights agree; conflicting duplicates are an error.
    pub fn from_edges(n_units: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut entries = Array2::zeros((n_units, n_units));
        let mut seen = vec![false; n_units * n_units];
        for &(src, dst, weight) in edges {
            if src >= n_units || dst >= n_units {
                return Err(CoreError::InvalidInput(format!(
                    "edge ({src},{dst}) references a unit outside 0..{n_units}"
                )));
            }
            if src == dst {
                return Err(CoreError::InvalidInput(format!(
                    "self-loop on unit {src} is not allowed"
                )));
            }
            if !weight.is_finite() || weight < 0.0 {
                return Err(CoreError::InvalidInput(format!(
                    "edge ({src},{dst}) has invalid weight {weight}"
                )));
            }
            let key = src.min(dst) * n_units + src.max(dst);
            if seen[key] && entries[[src, dst]] != weight {
                return Err(CoreError::InvalidInput(format!(
                    "edge ({src},{dst}) listed twice with conflicting weights"
                )));
            }
            seen[key] = true;
            entries[[src, dst]] = weight;
            entries[[dst, src]] = weight;
        }
        Self::from_dense(entries)
    }

    pub fn n_units(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    /// Per-unit strengths, the row sums of the matrix.
    pub fn strengths(&self) -> Array1<f64> {
        self.entries.sum_axis(ndarray::Axis(1))
    }

    /// Total strength `L` (twice the edge count for a 0/1 graph).
    pub fn total_strength(&self) -> f64 {
        self.entries.sum()
    }
}

/// Adjacency minus the configuration-model expectation `w_n w_m / L`.
///
/// Every row sums to zero, which is what makes the trivial one-cluster
/// partition score zero modularity.
#[derive(Debug, Clone)]
pub struct ModularityMatrix {
    entries: Array2<f64>,
    strengths: Array1<f64>,
    total_strength: f64,
}

impl ModularityMatrix {
    pub fn from_adjacency(a: &AdjacencyMatrix) -> Result<Self> {
        let total = a.total_strength();
        if total <= 0.0 {
            return Err(CoreError::ZeroStrengthNetwork);
        }
        let strengths = a.strengths();
        let n = a.n_units();
        let mut entries = Array2::zeros((n, n));
        for row in 0..n {
            for col in 0..n {
                entries[[row, col]] =
                    a.entries[[row, col]] - strengths[row] * strengths[col] / total;
            }
        }
        Ok(Self {
            entries,
            strengths,
            total_strength: total,
        })
    }

    pub fn n_units(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn strengths(&self) -> &Array1<f64> {
        &self.strengths
    }

    pub fn total_strength(&self) -> f64 {
        self.total_strength
    }
}

/// Fuzzy modularity of a partition: the pair sum
/// `sum_{n != m} b_{n,m} * sum_c u_{n,c} u_{m,c}`.
///
/// Self-pairs are excluded and the value is not divided by the total
/// strength, so crisp partitions score the plain pair-count difference
/// rather than the normalized index.
pub fn fuzzy_modularity(b: &ModularityMatrix, u: &MembershipMatrix) -> Result<f64> {
    if u.n_units() != b.n_units() {
        return Err(CoreError::DimensionMismatch(format!(
            "membership has {} rows but the network has {} units",
            u.n_units(),
            b.n_units()
        )));
    }
    // sum_c u_c^T B u_c, with the diagonal contribution removed.
    let bu = b.entries.dot(u.entries());
    let mut q = (&bu * u.entries()).sum();
    for n in 0..b.n_units() {
        let b_nn = b.entries[[n, n]];
        for c in 0..u.n_clusters() {
            q -= b_nn * u.entries()[[n, c]] * u.entries()[[n, c]];
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;
    use rand::Rng;

    fn membership(entries: Array2<f64>) -> MembershipMatrix {
        MembershipMatrix::new(entries).unwrap()
    }

    #[test]
    fn single_edge_modularity_matrix() {
        let a = AdjacencyMatrix::from_dense(array![[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let b = ModularityMatrix::from_adjacency(&a).unwrap();
        assert_eq!(b.strengths().to_vec(), vec![1.0, 1.0]);
        assert_eq!(b.total_strength(), 2.0);
        let expected = array![[-0.5, 0.5], [0.5, -0.5]];
        assert_eq!(b.entries(), &expected);
    }

    #[test]
    fn empty_network_is_rejected() {
        let a = AdjacencyMatrix::from_dense(Array2::zeros((3, 3))).unwrap();
        assert!(matches!(
            ModularityMatrix::from_adjacency(&a),
            Err(CoreError::ZeroStrengthNetwork)
        ));
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let mut entries = Array2::zeros((2, 2));
        entries[[0, 1]] = 1.0;
        assert!(matches!(
            AdjacencyMatrix::from_dense(entries),
            Err(CoreError::AsymmetricAdjacency(_))
        ));
    }

    #[test]
    fn nonzero_diagonal_is_rejected() {
        let mut entries = Array2::zeros((2, 2));
        entries[[0, 0]] = 1.0;
        assert!(matches!(
            AdjacencyMatrix::from_dense(entries),
            Err(CoreError::InvalidInput(_))
        ));
    }

    #[test]
    fn triangle_plus_pendant_matches_direct_formula() {
        // Triangle 0-1-2 with pendant 3 attached to 2.
        let a =
            AdjacencyMatrix::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (2, 3, 1.0)])
                .unwrap();
        let b = ModularityMatrix::from_adjacency(&a).unwrap();

        // Independent evaluation: loop the defining formula entry by entry.
        let w: Vec<f64> = (0..4).map(|n| a.entries().row(n).sum()).collect();
        let total: f64 = w.iter().sum();
        for n in 0..4 {
            for m in 0..4 {
                let expected = a.entries()[[n, m]] - w[n] * w[m] / total;
                assert_abs_diff_eq!(b.entries()[[n, m]], expected, epsilon = 1e-15);
            }
        }
        for n in 0..4 {
            assert_abs_diff_eq!(b.entries().row(n).sum(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn single_cluster_scores_negated_trace() {
        let a = AdjacencyMatrix::from_dense(array![[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let b = ModularityMatrix::from_adjacency(&a).unwrap();
        let u = membership(array![[1.0], [1.0]]);
        // Rows of B sum to zero, so the off-diagonal sum is minus the trace.
        assert_abs_diff_eq!(fuzzy_modularity(&b, &u).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn uniform_membership_divides_single_cluster_value() {
        let a =
            AdjacencyMatrix::from_edges(5, &[(0, 1, 1.0), (1, 2, 1.0), (3, 4, 1.0), (0, 4, 1.0)])
                .unwrap();
        let b = ModularityMatrix::from_adjacency(&a).unwrap();
        let single = membership(Array2::ones((5, 1)));
        let q_single = fuzzy_modularity(&b, &single).unwrap();
        for c in [2usize, 3, 4] {
            let uniform = membership(Array2::from_elem((5, c), 1.0 / c as f64));
            let q_uniform = fuzzy_modularity(&b, &uniform).unwrap();
            assert_abs_diff_eq!(q_uniform, q_single / c as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn random_membership_matches_triple_loop() {
        let a = AdjacencyMatrix::from_edges(
            5,
            &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (4, 0, 1.0), (1, 3, 1.0)],
        )
        .unwrap();
        let b = ModularityMatrix::from_adjacency(&a).unwrap();
        let mut rng = crate::seed::restart_rng(99, 0);
        let mut entries = Array2::zeros((5, 3));
        for n in 0..5 {
            let raw: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() + 1e-3).collect();
            let sum: f64 = raw.iter().sum();
            for c in 0..3 {
                entries[[n, c]] = raw[c] / sum;
            }
        }
        let u = membership(entries.clone());

        let mut expected = 0.0;
        for n in 0..5 {
            for m in 0..5 {
                if n == m {
                    continue;
                }
                for c in 0..3 {
                    expected += b.entries()[[n, m]] * entries[[n, c]] * entries[[m, c]];
                }
            }
        }
        assert_abs_diff_eq!(fuzzy_modularity(&b, &u).unwrap(), expected, epsilon = 1e-10);
    }

    #[test]
    fn membership_row_count_must_match() {
        let a = AdjacencyMatrix::from_dense(array![[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let b = ModularityMatrix::from_adjacency(&a).unwrap();
        let u = membership(Array2::ones((3, 1)));
        assert!(matches!(
            fuzzy_modularity(&b, &u),
            Err(CoreError::DimensionMismatch(_))
        ));
    }
}
