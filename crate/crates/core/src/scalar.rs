//! Numeric abstraction shared by every allocation routine.
//!
//! Rules, transformations and the cooperative game only need field
//! arithmetic and an ordering, so they are written once against [`Scalar`]
//! and instantiated for `f64`, `f32` and exact rationals. The IATA pipeline
//! needs a power function and is restricted to [`num_traits::Float`].

use std::fmt::Debug;

use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An ordered field element usable as money or weight.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Converts a count. Counts in this crate are tiny, so this never fails
    /// for the provided implementations.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Lossy conversion used for tolerances and reporting.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Builds a scalar from a finite `f64`. Rationals get the exact binary
    /// value of the float.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite value representable in scalar type")
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }

    /// Relative comparison: `|a - b| <= tol * max(1, |a|, |b|)`.
    /// With `tol == 0` this is exact equality.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let diff = (self.clone() - other.clone()).abs();
        if tol == 0.0 {
            return diff.is_zero();
        }
        let scale = Self::max_of(Self::one(), Self::max_of(self.abs(), other.abs()));
        diff <= Self::from_f64_lossy(tol) * scale
    }
}

impl Scalar for f64 {}
impl Scalar for f32 {}
impl Scalar for Rational64 {}
impl Scalar for BigRational {}

/// Sum of an iterator of scalars; the empty sum is zero.
pub fn sum<S: Scalar, I: IntoIterator<Item = S>>(items: I) -> S {
    items.into_iter().fold(S::zero(), |acc, x| acc + x)
}
