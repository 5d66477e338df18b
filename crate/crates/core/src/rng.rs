//! Seeded random streams.
//!
//! ChaCha8 is used everywhere a seed is accepted: its output is fixed by the
//! algorithm, so a seed reproduces the same stream on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
