//! The fuzzy partition matrix.

use ndarray::Array2;
use rand::Rng;

use crate::error::{CoreError, Result};

/// Row tolerance accepted when validating that memberships sum to one.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// N x C matrix of membership degrees: non-negative entries, each row on the
/// unit simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipMatrix {
    entries: Array2<f64>,
}

impl MembershipMatrix {
    pub fn new(entries: Array2<f64>) -> Result<Self> {
        let (n, c) = entries.dim();
        if n == 0 || c == 0 {
            return Err(CoreError::InvalidInput(
                "membership matrix must have at least one row and column".into(),
            ));
        }
        for row in 0..n {
            let mut sum = 0.0;
            for col in 0..c {
                let v = entries[[row, col]];
                if !v.is_finite() || v < 0.0 {
                    return Err(CoreError::InvalidInput(format!(
                        "membership ({row},{col}) = {v} is not a finite non-negative number"
                    )));
                }
                sum += v;
            }
            if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(CoreError::InvalidInput(format!(
                    "membership row {row} sums to {sum}, expected 1"
                )));
            }
        }
        Ok(Self { entries })
    }

    /// Internal constructor for matrices produced by row normalization.
    pub(crate) fn from_normalized(entries: Array2<f64>) -> Self {
        debug_assert!(entries
            .rows()
            .into_iter()
            .all(|r| (r.sum() - 1.0).abs() <= ROW_SUM_TOLERANCE));
        Self { entries }
    }

    /// Rows drawn from the flat (symmetric Dirichlet) distribution on the
    /// simplex: per entry an Exp(1) variate `-ln(1 - U)`, then the row is
    /// normalized. This exact recipe is part of the reproducibility
    /// contract; external reimplementations that consume the same RNG
    /// stream obtain the same matrix.
    pub fn random_simplex<R: Rng>(n_units: usize, n_clusters: usize, rng: &mut R) -> Self {
        let mut entries = Array2::zeros((n_units, n_clusters));
        for row in 0..n_units {
            let mut sum = 0.0;
            for col in 0..n_clusters {
                let e = -(1.0 - rng.gen::<f64>()).ln();
                entries[[row, col]] = e;
                sum += e;
            }
            if sum <= 0.0 {
                for col in 0..n_clusters {
                    entries[[row, col]] = 1.0 / n_clusters as f64;
                }
            } else {
                for col in 0..n_clusters {
                    entries[[row, col]] /= sum;
                }
            }
        }
        Self { entries }
    }

    pub fn uniform(n_units: usize, n_clusters: usize) -> Self {
        Self {
            entries: Array2::from_elem((n_units, n_clusters), 1.0 / n_clusters as f64),
        }
    }

    pub fn n_units(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_clusters(&self) -> usize {
        self.entries.ncols()
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    /// Entrywise L1 distance, the convergence measure of the fitting loops.
    pub fn l1_distance(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.entries.dim(), other.entries.dim());
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).abs())
            .sum()
    }

    /// Per-unit argmax cluster; ties resolve to the lowest cluster index.
    pub fn argmax_labels(&self) -> Vec<usize> {
        self.entries
            .rows()
            .into_iter()
            .map(|row| {
                let mut best = 0;
                let mut best_val = row[0];
                for (c, &v) in row.iter().enumerate().skip(1) {
                    if v > best_val {
                        best = c;
                        best_val = v;
                    }
                }
                best
            })
            .collect()
    }
}
