//! Deterministic random streams derived from a single root seed.
//!
//! Stream `i` of root seed `s` is ChaCha8 keyed by `s` with stream id `i`, so
//! the draws a consumer sees depend only on `(s, i)` and never on how work is
//! scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream ids reserved for components that run once per invocation.
pub mod streams {
    pub const GRAPH: u64 = u64::MAX;
    pub const SEEDING_SET: u64 = u64::MAX - 1;
    pub const DRIFT_LISTS: u64 = u64::MAX - 2;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootSeed(pub u64);

impl RootSeed {
    pub fn stream(self, id: u64) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(id);
        rng
    }

    pub fn sample_stream(self, index: usize) -> StreamRng {
        self.stream(index as u64)
    }
}
