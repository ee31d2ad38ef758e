//! Deterministic seed derivation.
//!
//! Every randomized routine in this crate draws from a ChaCha8 stream whose
//! seed is derived with the functions below, so results depend only on the
//! user-supplied base seed and the logical coordinates of the work item
//! (restart index, grid cell), never on scheduling order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Mixes a salt into a base seed (splitmix64 finalizer).
pub fn mix_seed(base: u64, salt: u64) -> u64 {
    let mut z = base ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for one grid cell, stable under any evaluation order of the grid.
pub fn cell_seed(base: u64, n_clusters: usize, gamma: f64) -> u64 {
    mix_seed(mix_seed(base, n_clusters as u64), gamma.to_bits())
}

/// RNG for one restart of a fit. Restarts use separate ChaCha streams of the
/// same seed, so they are independent and safe to run concurrently.
pub fn restart_rng(seed: u64, restart_index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart_index as u64);
    rng
}
