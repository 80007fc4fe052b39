//! Scalar abstraction shared by every numeric module.
//!
//! All math is written against [`Real`], which is implemented for `f32` and
//! `f64`. Gradient checks and physics validation run in `f64`; bulk training
//! can run in `f32`, where dense matrix products are roughly twice as fast.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use ndarray::NdFloat;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

pub trait Real:
    NdFloat + Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Short name used in logs and configuration (`"f32"` / `"f64"`).
    const NAME: &'static str;

    #[inline]
    fn of(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("f64 is representable")
    }

    #[inline]
    fn of_usize(v: usize) -> Self {
        <Self as FromPrimitive>::from_usize(v).expect("usize is representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).expect("finite scalar")
    }

    #[inline]
    fn as_f32(self) -> f32 {
        self.as_f64() as f32
    }
}

impl Real for f32 {
    const NAME: &'static str = "f32";
}

impl Real for f64 {
    const NAME: &'static str = "f64";
}
