//! Floating point abstraction shared by every numeric routine in the crate.
//!
//! All estimators, allocators and metrics are written against [`Scalar`] so
//! they run unchanged on `f32` and `f64`. Concrete `f64` aliases live at the
//! crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar type: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal. Every literal used in the crate is
    /// representable (possibly rounded) in both `f32` and `f64`.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal converts to scalar")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count converts to scalar")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }

    /// Default absolute tolerance for adaptive quadrature.
    fn quadrature_tolerance() -> Self;
}

impl Scalar for f32 {
    fn quadrature_tolerance() -> Self {
        64.0 * f32::EPSILON
    }
}

impl Scalar for f64 {
    fn quadrature_tolerance() -> Self {
        1e-11
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_round_trip() {
        assert_eq!(f64::lit(0.0035), 0.0035);
        assert_eq!(f32::lit(0.5), 0.5f32);
        assert_eq!(f64::from_count(252), 252.0);
        assert_eq!(1.25f32.as_f64(), 1.25);
    }
}
