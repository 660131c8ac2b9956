//! Seeded generators. Every randomized routine draws from a ChaCha stream so
//! that a seed and a stream id reproduce the same values on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Generator for `seed` on the default stream.
pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for trial `stream` under `seed`.
pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Seed of instance `index` within the family `salt`, derived from `seed`.
pub fn instance_seed(seed: u64, salt: u64, index: u64) -> u64 {
    use rand::Rng as _;
    stream(seed ^ salt.rotate_left(32), index).gen()
}
