//! Scalar traits the matrix kernel is generic over.
//!
//! [`Scalar`] covers the ring operations every matrix supports (enough for
//! tensor products, partial trace/transpose and trace identities) and is
//! implemented for `f32`, `f64` and exact rationals. [`Real`] adds the
//! floating-point operations needed by eigendecomposition, PSD checks and the
//! SDP engine.

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};
use std::fmt::Debug;
use std::ops::Neg;

/// Ring scalar: entries of a matrix are `Complex<T>` for `T: Scalar`.
pub trait Scalar: Num + Neg<Output = Self> + Clone + PartialEq + Debug + ToPrimitive {}

impl Scalar for f32 {}
impl Scalar for f64 {}
impl Scalar for num_rational::Ratio<i64> {}
impl Scalar for num_rational::Ratio<i128> {}

/// Floating-point scalar for numeric work (eigensolvers, norms, tolerances).
pub trait Real: Scalar + Float + FromPrimitive {
    /// Conversion shorthand for literals in generic code.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex zero.
pub fn czero<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Complex one.
pub fn cone<T: Scalar>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// Real value lifted to a complex scalar.
pub fn cre<T: Scalar>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}
