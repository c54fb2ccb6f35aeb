//! Coefficient scalars for the polynomial engine.
//!
//! Polynomials run in one of two modes behind the same interface: exact
//! big-rational coefficients for the ideal combinatorics and the Taylor
//! oracle, or complex floats for the orbit-span machinery that needs
//! unitaries. Conversion is exact-to-float only.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// Ring operations shared by both coefficient modes.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + 'static
{
    /// Complex conjugate; the identity on rationals.
    fn conjugate(&self) -> Self;

    fn from_integer(n: u64) -> Self;

    /// Lossy magnitude, used for float-mode tolerances and reporting.
    fn magnitude(&self) -> f64;

    /// Lossy value as a complex float.
    fn to_complex(&self) -> Complex64;
}

impl Scalar for BigRational {
    fn conjugate(&self) -> Self {
        self.clone()
    }

    fn from_integer(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Scalar for Complex64 {
    fn conjugate(&self) -> Self {
        self.conj()
    }

    fn from_integer(n: u64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }
}

/// `n!` as a scalar, multiplied out factor by factor so the exact mode
/// never overflows.
pub fn factorial<C: Scalar>(n: u64) -> C {
    let mut acc = C::one();
    for k in 2..=n {
        acc = acc * C::from_integer(k);
    }
    acc
}

/// Exact rational from a signed numerator and positive denominator.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
