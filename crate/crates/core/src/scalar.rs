//! Scalar abstraction: the core math is written once, generic over the
//! floating-point type, and instantiated at `f32`/`f64`.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};
use rustfft::FftNum;

/// Floating-point scalar usable everywhere in this crate: IEEE float with
/// constants, `f64` conversions, and FFT support.
pub trait Real: Float + FloatConst + FromPrimitive + FftNum + Display + LowerExp + Debug {}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into the working scalar type.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal not representable in scalar type")
}

/// `x²` without the `powi` detour.
#[inline]
pub fn sq<T: Real>(x: T) -> T {
    x * x
}
