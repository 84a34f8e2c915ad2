//! Seeded random streams.
//!
//! Every consumer derives its generator from a `(seed, stream)` pair so that
//! replicates can be evaluated in any order, on any number of threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Generator for stream `stream` of `seed`.
pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream identifiers used inside the crate, kept apart so that different
/// consumers of the same seed never share a stream.
pub mod streams {
    pub const PERMUTATION_BASE: u64 = 1 << 32;
    pub const SYNTHETIC: u64 = 7;
    pub const RANDOM_MEASURE: u64 = 11;
    pub const VERIFY_BASE: u64 = 1 << 40;
}
