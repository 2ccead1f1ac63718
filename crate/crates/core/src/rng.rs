//! Seed derivation for reproducible parallel streams.
//!
//! Every unit of work (replicate, dataset, fold plan, ...) owns an RNG
//! derived from the master seed plus a path of stream labels, so results do
//! not depend on scheduling or thread count.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

/// The RNG used throughout the crate.
pub type Rng = ChaCha8Rng;

/// SplitMix64 finalizer; good avalanche behavior for seed mixing.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed from a master seed and a stream path.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut state = splitmix64(master ^ 0x6a09_e667_f3bc_c908);
    for &label in path {
        state = splitmix64(state ^ splitmix64(label));
    }
    state
}

/// RNG for the stream identified by `path` under `master`.
pub fn stream_rng(master: u64, path: &[u64]) -> Rng {
    Rng::seed_from_u64(derive_seed(master, path))
}

// Stream labels; values are arbitrary but fixed for reproducibility.
pub const STREAM_CORRELATION: u64 = 1;
pub const STREAM_MARGINS: u64 = 2;
pub const STREAM_PREDICTOR: u64 = 3;
pub const STREAM_TRAIN: u64 = 4;
pub const STREAM_TEST: u64 = 5;
pub const STREAM_PLAN: u64 = 6;
pub const STREAM_REPLICATE: u64 = 7;
