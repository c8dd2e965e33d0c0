//! Floating-point abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar type the forecasting pipelines are generic over.
///
/// Implemented for `f32` and `f64`. Random variates are always generated in
/// `f64` and narrowed with [`Scalar::of`], so a given seed drives the same
/// underlying stream regardless of the working precision.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` constant into this type.
    fn of(x: f64) -> Self;

    /// Widens to `f64`.
    fn to_f64_lossy(self) -> f64;

    /// Converts a count into this type.
    fn from_count(n: usize) -> Self {
        Self::of(n as f64)
    }
}

impl Scalar for f64 {
    #[inline]
    fn of(x: f64) -> Self {
        x
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    #[inline]
    fn of(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

/// Arithmetic mean; zero for an empty slice.
pub fn mean<T: Scalar>(xs: &[T]) -> T {
    if xs.is_empty() {
        return T::zero();
    }
    xs.iter().copied().sum::<T>() / T::from_count(xs.len())
}
