//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar the crate is generic over (`f32`, `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Panics only if the target type cannot
    /// represent finite `f64` values, which never happens for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn from_i32_lossy(n: i32) -> Self {
        Self::from_i32(n).expect("i32 representable")
    }

    /// Euler–Mascheroni constant.
    #[inline]
    fn euler_gamma() -> Self {
        Self::lit(EULER_GAMMA)
    }

    /// Relative rounding unit.
    #[inline]
    fn precision() -> Self {
        Self::epsilon()
    }

    /// Magnitude above which recurrences rescale to stay finite.
    #[inline]
    fn rescale_threshold() -> Self {
        Self::max_value().sqrt()
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(feature = "quad")]
impl Real for f128::f128 {
    fn euler_gamma() -> Self {
        let hi = f128::f128::from(0.577_215_664_901_532_9f64);
        hi + f128::f128::from(-4.942_915_152_430_645e-18f64)
    }
}

/// IEEE binary128 scalar (about 34 significant digits) for checks that sit
/// below `f64` rounding.
#[cfg(feature = "quad")]
pub type Quad = f128::f128;

/// Euler–Mascheroni constant γ to 20 significant digits.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

#[inline]
pub(crate) fn real<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub(crate) fn imag_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}
