//! Scalar abstraction shared by every module.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive, Zero};
use rustfft::FftNum;

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Debug + Display + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Tolerance used for structural checks (det = 1, orthogonality): `1e-12`,
    /// widened to a few ulps for types too coarse to resolve it.
    #[inline]
    fn structural_tol() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(64.0))
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + FftNum
        + Debug
        + Display
        + Sum
        + Send
        + Sync
        + 'static
{
}

/// Values a field function may take: real scalars or complex numbers over them.
pub trait FieldValue<T: Real>:
    Copy
    + Debug
    + Send
    + Sync
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<T, Output = Self>
    + 'static
{
    /// Absolute value (modulus for complex values).
    fn modulus(self) -> T;

    fn into_complex(self) -> Complex<T>;

    /// Inverse of `into_complex`; real values keep the real part.
    fn from_complex(c: Complex<T>) -> Self;
}

impl<T: Real> FieldValue<T> for T {
    #[inline]
    fn modulus(self) -> T {
        self.abs()
    }

    #[inline]
    fn into_complex(self) -> Complex<T> {
        Complex::new(self, T::zero())
    }

    #[inline]
    fn from_complex(c: Complex<T>) -> Self {
        c.re
    }
}

impl<T: Real> FieldValue<T> for Complex<T> {
    #[inline]
    fn modulus(self) -> T {
        self.norm()
    }

    #[inline]
    fn into_complex(self) -> Complex<T> {
        self
    }

    #[inline]
    fn from_complex(c: Complex<T>) -> Self {
        c
    }
}
