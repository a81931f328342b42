//! Seed derivation. Every random stream in the crate is a ChaCha8 generator
//! whose seed is a pure function of a master seed and a path of integers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stage tags mixed into derived seeds.
pub mod stage {
    pub const SPLIT: u64 = 1;
    pub const BOOTSTRAP: u64 = 2;
    pub const TREE: u64 = 3;
    pub const PERMUTATION: u64 = 4;
    pub const ENSEMBLE: u64 = 5;
}

fn mix(mut z: u64) -> u64 {
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from `master` and `path`. Distinct paths give
/// statistically independent seeds; the result depends on nothing else.
pub fn derive(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(mix(master ^ 0x9e37_79b9_7f4a_7c15), |acc, &p| {
            mix(acc.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(mix(p)))
        })
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
