//! Floating-point scalar abstraction used by the real-valued stages of the pipeline.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Scalar type for power coefficients, convergence matrices and risk numbers: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an integer count or rank; exact for every value this crate produces.
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer representable in scalar")
    }

    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
