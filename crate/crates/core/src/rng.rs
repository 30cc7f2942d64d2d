//! Seeded random streams.
//!
//! Every random choice in the crate is drawn from ChaCha8 seeded with a
//! 64-bit integer, so a run is reproducible bit-for-bit from its seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identifier echoed in run logs next to the seed.
pub const RNG_ALGORITHM: &str = "chacha8";

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for trial `index` of a batch seeded with `seed`.
pub fn stream(seed: u64, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
