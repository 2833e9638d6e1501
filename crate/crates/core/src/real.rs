//! Scalar abstraction shared by every kernel in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Floating point scalar usable by the spectral kernels: `f32` or `f64`.
///
/// Both `Float` and `Signed` (through `FftNum`) provide `abs`; call
/// [`Real::mag`] or `Float::abs` to keep method resolution unambiguous.
pub trait Real:
    FftNum + Float + FloatConst + Sum + Display + LowerExp + Debug + Default + Send + Sync
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("representable size")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        <Self as ToPrimitive>::to_f64(&self).unwrap_or(f64::NAN)
    }

    #[inline]
    fn mag(self) -> Self {
        Float::abs(self)
    }

    /// `x` clamped from below by a small multiple of the type's epsilon, so
    /// that tolerances written for `f64` stay meaningful in `f32`.
    #[inline]
    fn tol(x: f64) -> Self {
        Float::max(Self::lit(x), Self::epsilon() * Self::lit(256.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}
