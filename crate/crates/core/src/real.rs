//! Scalar abstraction for the probabilities and thresholds carried by updates.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};
use rand::Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point type used for `tau`, the branch probabilities and the
/// decode thresholds. Implemented for `f32` and `f64`.
pub trait Real:
    Float + FromPrimitive + Debug + Display + Default + Send + Sync + Serialize + DeserializeOwned + 'static
{
    /// Slack allowed when checking that a computed probability lies in `[0, 1]`.
    fn probability_slack() -> Self;

    /// A uniform draw from `[0, 1)`.
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable as float")
    }
}

impl Real for f32 {
    fn probability_slack() -> Self {
        1e-5
    }

    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen()
    }
}

impl Real for f64 {
    fn probability_slack() -> Self {
        1e-12
    }

    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen()
    }
}
