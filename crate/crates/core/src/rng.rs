//! Seeded randomness.
//!
//! Every randomized routine takes a `u64` seed and draws from ChaCha8, so a
//! run is replayable from the seed recorded in its certificate. Child seeds
//! for nested or parallel work are derived with splitmix64.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// splitmix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the `index`-th child of a computation seeded with `parent`.
pub fn child_seed(parent: u64, index: u64) -> u64 {
    mix64(mix64(parent) ^ index.wrapping_mul(0xd6e8_feb8_6659_fd93))
}
