//! Perfectly uniform proper `k`-colorings of bounded-degree graphs.
//!
//! Sampling runs coupling from the past over blocks of Glauber updates. Each
//! block is generated together with a bounding chain (per-vertex candidate
//! colour sets); when every set in the chain shrinks to one colour the block
//! is a constant map and its image is an exact sample.
//!
//! The numeric types are generic over [`Real`]; the aliases below fix them to
//! `f64` (and `f32` where a smaller record is wanted).

pub mod bounding;
pub mod coloring;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod real;
pub mod rng;
pub mod sampler;
pub mod seeding_set;
pub mod updates;

pub use bounding::{compute_stats, BoundingList, NeighborhoodStats, PairRule};
pub use coloring::{Color, Coloring};
pub use error::{Error, Promise, PromiseViolation, Result};
pub use graph::{Graph, GraphKind, Vertex};
pub use real::Real;
pub use rng::RootSeed;
pub use sampler::{perfect_sample, PerfectSampler, SampleOutcome, SamplerConfig};
pub use oracle::{enumerate_colorings, UniformityReport};
pub use seeding_set::SeedingSet;
pub use updates::{Branch, UpdateKind, UpdateSpec};

/// Update record with double-precision thresholds.
pub type UpdateRecord = updates::UpdateRecord<f64>;
/// Update record with single-precision thresholds.
pub type UpdateRecord32 = updates::UpdateRecord<f32>;
pub type SamplerBlock = sampler::SamplerBlock<f64>;
pub type SamplerBlock32 = sampler::SamplerBlock<f32>;
pub type SamplerUnit<'a> = sampler::SamplerUnit<'a, f64>;
