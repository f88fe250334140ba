//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point type usable as the sample type of gait trajectories.
///
/// Implemented for `f32` and `f64`. The `Debug` rendering of both is the
/// shortest string that parses back to the same value, which the text
/// exporters rely on for exact round trips.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal or configuration value into `Self`.
    fn lit(v: f64) -> Self;

    fn half() -> Self {
        Self::lit(0.5)
    }

    /// Shortest round-trip text form (`5.0`, `0.1`, `1e-8`).
    fn to_text(self) -> String {
        format!("{self:?}")
    }
}

impl Scalar for f32 {
    fn lit(v: f64) -> Self {
        v as f32
    }
}

impl Scalar for f64 {
    fn lit(v: f64) -> Self {
        v
    }
}

/// Arithmetic mean of a non-empty slice. Returns `None` on empty input.
pub fn mean<T: Scalar>(values: &[T]) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    let n = T::from_usize(values.len())?;
    Some(values.iter().copied().sum::<T>() / n)
}
