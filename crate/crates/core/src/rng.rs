//! Seeded generators. Every random draw in the crate goes through here.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `index` under `seed`; used to give each trial or
/// corpus item its own generator regardless of execution order.
pub fn substream(seed: u64, index: u64) -> SimRng {
    let mut rng = seeded(seed);
    rng.set_stream(index);
    rng
}
