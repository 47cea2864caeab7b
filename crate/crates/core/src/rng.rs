//! Seeded, splittable random streams.
//!
//! Every stochastic operation in the crate takes its generator explicitly.
//! Independent streams are derived from one 64-bit seed by ChaCha stream id,
//! so batches can be generated in any order or in parallel with identical
//! results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TaskRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> TaskRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream `stream` of the generator seeded by `seed`.
pub fn stream(seed: u64, stream: u64) -> TaskRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
