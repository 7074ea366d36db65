#![allow(dead_code)]

pub mod tables;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded RNG for test-data generation; `EEF_SEED` overrides the default.
pub fn rng(default_seed: u64) -> ChaCha8Rng {
    let seed = std::env::var("EEF_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(default_seed);
    ChaCha8Rng::seed_from_u64(seed)
}
