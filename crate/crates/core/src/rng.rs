//! Seeded random streams. Each consumer inside one realization draws from
//! its own ChaCha stream so adding draws in one stage never shifts another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Growth = 1,
    Users = 2,
    Routing = 3,
    Traffic = 4,
    NullModel = 5,
}

pub fn seeded_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}
