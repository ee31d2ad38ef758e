//! Alternating-optimization loop shared by the four fitting algorithms.
//!
//! One restart: draw a random membership matrix, then repeat
//! (prototype update from the current memberships, membership sweep from the
//! previous memberships) until the entrywise L1 change falls under the
//! tolerance or the iteration cap is reached. Restarts are independent and
//! run in parallel; the one with the lowest objective wins, ties going to
//! the lowest restart index so the outcome never depends on scheduling.

use ndarray::Array2;
use rayon::prelude::*;

use crate::membership::MembershipMatrix;
use crate::seed::restart_rng;

pub(crate) trait AlternatingModel: Sync {
    type Proto: Clone + Send;

    fn n_units(&self) -> usize;
    fn init_prototypes(&self, u: &MembershipMatrix) -> Self::Proto;
    fn update_prototypes(&self, u: &MembershipMatrix, prev: &Self::Proto) -> Self::Proto;
    fn update_membership(&self, u_prev: &MembershipMatrix, proto: &Self::Proto)
        -> MembershipMatrix;
    fn objective(&self, u: &MembershipMatrix, proto: &Self::Proto) -> f64;
}

pub(crate) struct RunOutcome<P> {
    pub membership: MembershipMatrix,
    pub prototypes: P,
    pub objective: f64,
    pub n_iterations: usize,
    pub converged: bool,
    pub restart_index: usize,
}

fn run_single<M: AlternatingModel>(
    model: &M,
    n_clusters: usize,
    max_iter: usize,
    conv_tol: f64,
    seed: u64,
    restart_index: usize,
) -> RunOutcome<M::Proto> {
    let mut rng = restart_rng(seed, restart_index);
    let mut u = MembershipMatrix::random_simplex(model.n_units(), n_clusters, &mut rng);
    let mut proto = model.init_prototypes(&u);

    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iter {
        proto = model.update_prototypes(&u, &proto);
        let u_next = model.update_membership(&u, &proto);
        let diff = u.l1_distance(&u_next);
        u = u_next;
        iterations += 1;
        if diff < conv_tol {
            converged = true;
            break;
        }
    }

    let objective = model.objective(&u, &proto);
    assert!(objective.is_finite(), "objective diverged to {objective}");
    RunOutcome {
        membership: u,
        prototypes: proto,
        objective,
        n_iterations: iterations,
        converged,
        restart_index,
    }
}

pub(crate) fn run_restarts<M: AlternatingModel>(
    model: &M,
    n_clusters: usize,
    max_iter: usize,
    conv_tol: f64,
    n_restarts: usize,
    seed: u64,
) -> RunOutcome<M::Proto> {
    (0..n_restarts)
        .into_par_iter()
        .map(|restart| run_single(model, n_clusters, max_iter, conv_tol, seed, restart))
        .min_by(|a, b| {
            (a.objective, a.restart_index)
                .partial_cmp(&(b.objective, b.restart_index))
                .expect("objectives are finite")
        })
        .expect("at least one restart")
}

/// Row-wise softmax of the exponent matrix, with the per-row maximum
/// subtracted first. The shift cancels in the normalization, so the result
/// is exactly the written update while never overflowing; the row sum of the
/// shifted exponentials is at least 1, so the division is always defined.
pub(crate) fn row_softmax(mut exponents: Array2<f64>) -> MembershipMatrix {
    for mut row in exponents.rows_mut() {
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        debug_assert!(max.is_finite(), "membership exponents must be finite");
        row.mapv_inplace(|e| (e - max).exp());
        let sum = row.sum();
        assert!(
            sum >= 1.0,
            "membership row lost all mass after the max shift"
        );
        row.mapv_inplace(|e| e / sum);
    }
    MembershipMatrix::from_normalized(exponents)
}

/// `(B u)_{n,c}` with the self-pair term removed, the network portion of the
/// membership exponents.
pub(crate) fn offdiag_product(matrix: &Array2<f64>, u: &MembershipMatrix) -> Array2<f64> {
    let mut product = matrix.dot(u.entries());
    for n in 0..matrix.nrows() {
        let diag = matrix[[n, n]];
        if diag != 0.0 {
            for c in 0..u.n_clusters() {
                product[[n, c]] -= diag * u.entries()[[n, c]];
            }
        }
    }
    product
}

/// `sum_{n,c} u log u`, reading `0 log 0` as zero.
pub(crate) fn entropy_term(u: &MembershipMatrix) -> f64 {
    u.entries()
        .iter()
        .map(|&v| if v > 0.0 { v * v.ln() } else { 0.0 })
        .sum()
}
