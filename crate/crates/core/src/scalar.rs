//! Scalar abstraction for fractional statistics.
//!
//! Counting is always exact (`u64`); only derived shares, probabilities,
//! and gap values are computed in a floating-point type. All analytics are
//! generic over [`Scalar`] so callers can pick `f32` or `f64`; the crate
//! root re-exports everything with [`DefaultScalar`] (`f64`).

use std::fmt::Debug;
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar used for shares and probabilities: `f32` or `f64`.
pub trait Scalar: Float + FromPrimitive + Sum + Debug + Send + Sync + 'static {
    /// Exact conversion from a count. Counts above the mantissa range are
    /// rounded, which is fine for ratio computation.
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).unwrap_or_else(Self::max_value)
    }

    /// `numerator / denominator`, defined as zero when the denominator is zero.
    fn ratio(numerator: u64, denominator: u64) -> Self {
        if denominator == 0 {
            Self::zero()
        } else {
            Self::from_count(numerator) / Self::from_count(denominator)
        }
    }

    /// Lossless-enough view for formatting.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// The scalar type used by the concrete aliases at the crate root.
pub type DefaultScalar = f64;
