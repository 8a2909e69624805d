//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating point type used for coordinates, costs and loads: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Sum + Debug + Display + FromStr + Default + Send + Sync + 'static
{
    /// Absolute tolerance for cost and load comparisons.
    fn tolerance() -> Self;

    /// Lossy conversion from `f64`, used for literals and parsed text.
    fn of(value: f64) -> Self {
        Self::from_f64(value).unwrap_or_else(Self::nan)
    }

    /// `self <= other` up to the absolute tolerance.
    fn le_tol(self, other: Self) -> bool {
        self <= other + Self::tolerance()
    }

    /// `|self - other| <= tolerance`.
    fn approx_eq(self, other: Self) -> bool {
        (self - other).abs() <= Self::tolerance()
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-4
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-9
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerant_comparisons() {
        assert!(1.0f64.le_tol(1.0 - 1e-12));
        assert!(!1.0f64.le_tol(1.0 - 1e-6));
        assert!(0.1f64.approx_eq(0.3 - 0.2));
        assert!(2.0f32.approx_eq(2.00001));
        assert_eq!(f32::of(0.5), 0.5f32);
    }
}
