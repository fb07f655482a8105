//! Floating-point scalar abstraction for the spectral and dynamics layers.
//!
//! Combinatorics stay in exact integers; everything that touches Fourier
//! amplitudes is generic over [`Real`] so the same code runs in `f32` and `f64`.

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Send
    + Sync
    + Debug
    + Display
    + LowerExp
    + 'static
{
    /// Relative tolerance used when validating reality and incompressibility.
    const VALIDATION_TOL: Self;

    #[inline]
    fn int(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("integer representable as float")
    }

    #[inline]
    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("literal representable as float")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const VALIDATION_TOL: Self = 1e-12;
}

impl Real for f32 {
    const VALIDATION_TOL: Self = 1e-5;
}
