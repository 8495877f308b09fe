//! Scalar abstraction for the numeric core.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar the library is generic over.
///
/// Implemented for `f32` and `f64` through the blanket impl below. The bounds
/// cover ordinary arithmetic, conversion from literals, and thread safety so
/// solver routines can run in parallel.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` constant into the scalar type.
    ///
    /// For `f32` this rounds; for `f64` it is the identity. Panics only if the
    /// target type has no finite representation at all, which cannot happen
    /// for the supported types.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("finite f64 constant must convert")
    }

    /// Converts a (small) signed integer exactly.
    fn of_int(value: i64) -> Self {
        Self::from_i64(value).expect("small integer must convert")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
