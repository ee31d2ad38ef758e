//! Independent oracles and reference implementations for the acceptance
//! suite. Everything here is written with plain scalar loops, separate from
//! the library's matrix-based code paths, so agreement between the two is
//! meaningful.

#![allow(dead_code)]

use modclust_core::membership::MembershipMatrix;
use modclust_core::modes::CategoryCode;
use modclust_core::seed::restart_rng;
use ndarray::Array2;
use rand::Rng;

/// Modularity matrix by the defining formula, one entry at a time.
pub fn naive_modularity(a: &Array2<f64>) -> Array2<f64> {
    let n = a.nrows();
    let w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a[[i, j]]).sum()).collect();
    let total: f64 = w.iter().sum();
    let mut b = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            b[[i, j]] = a[[i, j]] - w[i] * w[j] / total;
        }
    }
    b
}

/// Fuzzy modularity by the defining triple loop (self-pairs excluded).
pub fn naive_fuzzy_modularity(b: &Array2<f64>, u: &Array2<f64>) -> f64 {
    let n = b.nrows();
    let c_count = u.ncols();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for c in 0..c_count {
                q += b[[i, j]] * u[[i, c]] * u[[j, c]];
            }
        }
    }
    q
}

pub fn naive_sq_euclid(x: &Array2<f64>, a: usize, b: usize) -> f64 {
    (0..x.ncols()).map(|i| (x[[a, i]] - x[[b, i]]).powi(2)).sum()
}

pub fn naive_hamming_sq(x: &Array2<CategoryCode>, row: usize, mode: &[CategoryCode]) -> f64 {
    let d = (0..x.ncols()).filter(|&i| x[[row, i]] != mode[i]).count() as f64;
    d * d
}

fn entropy(u: &Array2<f64>) -> f64 {
    u.iter().map(|&v| if v > 0.0 { v * v.ln() } else { 0.0 }).sum()
}

/// Medoid-algorithm objective by definition.
pub fn naive_objective_md(
    x: &Array2<f64>,
    b: &Array2<f64>,
    u: &Array2<f64>,
    medoids: &[usize],
    gamma: f64,
    p: f64,
) -> f64 {
    let mut dist = 0.0;
    for (c, &med) in medoids.iter().enumerate() {
        for n in 0..x.nrows() {
            dist += u[[n, c]] * naive_sq_euclid(x, n, med);
        }
    }
    (1.0 - gamma) * dist + p * entropy(u) - 0.5 * gamma * naive_fuzzy_modularity(b, u)
}

/// Mode-algorithm objective by definition.
pub fn naive_objective_mo(
    x: &Array2<CategoryCode>,
    b: &Array2<f64>,
    u: &Array2<f64>,
    modes: &[Vec<CategoryCode>],
    gamma: f64,
    p: f64,
) -> f64 {
    let mut dist = 0.0;
    for (c, mode) in modes.iter().enumerate() {
        for n in 0..x.nrows() {
            dist += u[[n, c]] * naive_hamming_sq(x, n, mode);
        }
    }
    (1.0 - gamma) * dist + p * entropy(u) - 0.5 * gamma * naive_fuzzy_modularity(b, u)
}

/// One scalar membership sweep for fixed per-(unit, cluster) distances.
pub fn naive_membership_sweep(
    dist2: &Array2<f64>,
    b: &Array2<f64>,
    u_prev: &Array2<f64>,
    gamma: f64,
    p: f64,
) -> Array2<f64> {
    let (n_units, n_clusters) = u_prev.dim();
    let mut next = Array2::zeros((n_units, n_clusters));
    for n in 0..n_units {
        let mut exponents = vec![0.0; n_clusters];
        for c in 0..n_clusters {
            let mut coupling = 0.0;
            for m in 0..n_units {
                if m != n {
                    coupling += b[[n, m]] * u_prev[[m, c]];
                }
            }
            exponents[c] = -((1.0 - gamma) * dist2[[n, c]] - gamma * coupling) / p;
        }
        let max = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = exponents.iter().map(|&e| (e - max).exp()).collect();
        let total: f64 = weights.iter().sum();
        for c in 0..n_clusters {
            next[[n, c]] = weights[c] / total;
        }
    }
    next
}

/// Runs the membership fixed point for fixed prototypes, starting from the
/// uniform partition.
pub fn membership_fixed_point(
    dist2: &Array2<f64>,
    b: &Array2<f64>,
    gamma: f64,
    p: f64,
    tol: f64,
) -> Array2<f64> {
    let (n_units, n_clusters) = dist2.dim();
    let mut u = Array2::from_elem((n_units, n_clusters), 1.0 / n_clusters as f64);
    for _ in 0..20_000 {
        let next = naive_membership_sweep(dist2, b, &u, gamma, p);
        let diff: f64 = u.iter().zip(next.iter()).map(|(a, b)| (a - b).abs()).sum();
        u = next;
        if diff < tol {
            break;
        }
    }
    u
}

/// Largest per-unit spread of the first-order condition
/// `log u + (1/p)((1-gamma) d^2 - gamma sum b u)`; zero at stationarity.
pub fn naive_stationarity_gap(
    dist2: &Array2<f64>,
    b: &Array2<f64>,
    u: &Array2<f64>,
    gamma: f64,
    p: f64,
) -> f64 {
    let (n_units, n_clusters) = u.dim();
    let mut worst: f64 = 0.0;
    for n in 0..n_units {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for c in 0..n_clusters {
            let mut coupling = 0.0;
            for m in 0..n_units {
                if m != n {
                    coupling += b[[n, m]] * u[[m, c]];
                }
            }
            let g = u[[n, c]].ln() + ((1.0 - gamma) * dist2[[n, c]] - gamma * coupling) / p;
            lo = lo.min(g);
            hi = hi.max(g);
        }
        worst = worst.max(hi - lo);
    }
    worst
}

/// The random-simplex initialization contract: per entry an Exp(1) draw
/// `-ln(1 - U)`, rows normalized, consumed row-major from the restart
/// stream.
pub fn reference_initial_membership(
    n_units: usize,
    n_clusters: usize,
    seed: u64,
    restart: usize,
) -> Array2<f64> {
    let mut rng = restart_rng(seed, restart);
    let mut u = Array2::zeros((n_units, n_clusters));
    for n in 0..n_units {
        let mut sum = 0.0;
        for c in 0..n_clusters {
            let e = -(1.0 - rng.gen::<f64>()).ln();
            u[[n, c]] = e;
            sum += e;
        }
        for c in 0..n_clusters {
            u[[n, c]] /= sum;
        }
    }
    u
}

fn argmax_row(u: &Array2<f64>, n: usize) -> usize {
    let mut best = 0;
    for c in 1..u.ncols() {
        if u[[n, c]] > u[[n, best]] {
            best = c;
        }
    }
    best
}

/// Plain entropic fuzzy c-medoids (no network term): independent reference
/// used for the gamma = 0 equivalence check. Mirrors the public restart and
/// initialization contract, with all numerics done in scalar loops.
pub fn reference_entropic_cmedoids(
    x: &Array2<f64>,
    n_clusters: usize,
    p: f64,
    max_iter: usize,
    conv_tol: f64,
    n_restarts: usize,
    seed: u64,
) -> (Array2<f64>, Vec<usize>, f64) {
    let n_units = x.nrows();
    let mut best: Option<(f64, usize, Array2<f64>, Vec<usize>)> = None;
    for restart in 0..n_restarts {
        let mut u = reference_initial_membership(n_units, n_clusters, seed, restart);
        let mut medoids: Vec<usize> = (0..n_clusters).collect();
        for _ in 0..max_iter {
            medoids = reference_medoid_update(x, &u, &medoids);
            let mut dist2 = Array2::zeros((n_units, n_clusters));
            for (c, &med) in medoids.iter().enumerate() {
                for n in 0..n_units {
                    dist2[[n, c]] = naive_sq_euclid(x, n, med);
                }
            }
            let next = naive_membership_sweep(&dist2, &Array2::zeros((n_units, n_units)), &u, 0.0, p);
            let diff: f64 = u.iter().zip(next.iter()).map(|(a, b)| (a - b).abs()).sum();
            u = next;
            if diff < conv_tol {
                break;
            }
        }
        let mut objective = p * entropy(&u);
        for (c, &med) in medoids.iter().enumerate() {
            for n in 0..n_units {
                objective += u[[n, c]] * naive_sq_euclid(x, n, med);
            }
        }
        let better = match &best {
            None => true,
            Some((obj, _, _, _)) => objective < *obj,
        };
        if better {
            best = Some((objective, restart, u, medoids));
        }
    }
    let (objective, _, u, medoids) = best.unwrap();
    (u, medoids, objective)
}

fn reference_medoid_update(x: &Array2<f64>, u: &Array2<f64>, prev: &[usize]) -> Vec<usize> {
    let n_units = x.nrows();
    let n_clusters = u.ncols();
    let labels: Vec<usize> = (0..n_units).map(|n| argmax_row(u, n)).collect();
    let mut taken = vec![false; n_units];
    let mut next = Vec::with_capacity(n_clusters);
    for c in 0..n_clusters {
        let members: Vec<usize> = (0..n_units).filter(|&n| labels[n] == c).collect();
        let chosen = if members.is_empty() {
            fallback(prev[c], &taken)
        } else {
            let mut ranked: Vec<(f64, usize)> = members
                .iter()
                .map(|&q| {
                    let cost: f64 =
                        (0..n_units).map(|n| u[[n, c]] * naive_sq_euclid(x, n, q)).sum();
                    (cost, q)
                })
                .collect();
            ranked.sort_by(|a, b| a.partial_cmp(b).unwrap());
            match ranked.iter().find(|&&(_, q)| !taken[q]) {
                Some(&(_, q)) => q,
                None => fallback(prev[c], &taken),
            }
        };
        taken[chosen] = true;
        next.push(chosen);
    }
    next
}

fn fallback(preferred: usize, taken: &[bool]) -> usize {
    if !taken[preferred] {
        preferred
    } else {
        taken.iter().position(|&t| !t).unwrap()
    }
}

/// Plain entropic fuzzy c-modes, the categorical counterpart of
/// [`reference_entropic_cmedoids`].
pub fn reference_entropic_cmodes(
    x: &Array2<CategoryCode>,
    domain_sizes: &[usize],
    n_clusters: usize,
    p: f64,
    max_iter: usize,
    conv_tol: f64,
    n_restarts: usize,
    seed: u64,
) -> (Array2<f64>, Vec<Vec<CategoryCode>>, f64) {
    let n_units = x.nrows();
    let n_attrs = x.ncols();
    let mut best: Option<(f64, usize, Array2<f64>, Vec<Vec<CategoryCode>>)> = None;
    for restart in 0..n_restarts {
        let mut u = reference_initial_membership(n_units, n_clusters, seed, restart);
        let mut modes = vec![vec![0 as CategoryCode; n_attrs]; n_clusters];
        for _ in 0..max_iter {
            for (c, mode) in modes.iter_mut().enumerate() {
                for i in 0..n_attrs {
                    let mut weights = vec![0.0; domain_sizes[i]];
                    for n in 0..n_units {
                        weights[x[[n, i]] as usize] += u[[n, c]];
                    }
                    let mut best_v = 0;
                    for (v, &w) in weights.iter().enumerate().skip(1) {
                        if w > weights[best_v] {
                            best_v = v;
                        }
                    }
                    mode[i] = best_v as CategoryCode;
                }
            }
            let mut dist2 = Array2::zeros((n_units, n_clusters));
            for (c, mode) in modes.iter().enumerate() {
                for n in 0..n_units {
                    dist2[[n, c]] = naive_hamming_sq(x, n, mode);
                }
            }
            let next = naive_membership_sweep(&dist2, &Array2::zeros((n_units, n_units)), &u, 0.0, p);
            let diff: f64 = u.iter().zip(next.iter()).map(|(a, b)| (a - b).abs()).sum();
            u = next;
            if diff < conv_tol {
                break;
            }
        }
        let mut objective = p * entropy(&u);
        for (c, mode) in modes.iter().enumerate() {
            for n in 0..n_units {
                objective += u[[n, c]] * naive_hamming_sq(x, n, mode);
            }
        }
        let better = match &best {
            None => true,
            Some((obj, _, _, _)) => objective < *obj,
        };
        if better {
            best = Some((objective, restart, u, modes.clone()));
        }
    }
    let (objective, _, u, modes) = best.unwrap();
    (u, modes, objective)
}

/// Random connected-enough binary graph with at least one edge.
pub fn random_graph_entries(n: usize, p_edge: f64, rng: &mut impl Rng) -> Array2<f64> {
    loop {
        let mut entries = Array2::zeros((n, n));
        for a in 0..n {
            for b in (a + 1)..n {
                if rng.gen::<f64>() < p_edge {
                    entries[[a, b]] = 1.0;
                    entries[[b, a]] = 1.0;
                }
            }
        }
        if entries.sum() > 0.0 {
            return entries;
        }
    }
}

/// Majority argmax cluster among the units of one ground-truth block.
pub fn block_majority(labels: &[usize], blocks: &[usize], block: usize) -> usize {
    let mut counts = std::collections::HashMap::new();
    for (n, &b) in blocks.iter().enumerate() {
        if b == block {
            *counts.entry(labels[n]).or_insert(0usize) += 1;
        }
    }
    counts
        .into_iter()
        .max_by_key(|&(label, count)| (count, std::cmp::Reverse(label)))
        .map(|(label, _)| label)
        .unwrap()
}

pub fn entries_of(u: &MembershipMatrix) -> &Array2<f64> {
    u.entries()
}
