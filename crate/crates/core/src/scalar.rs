//! Scalar abstractions shared by the numeric backends.
//!
//! Group-algebra coefficients, characteristic-class series and the exact
//! backend are all written against [`Coeff`], which is implemented for every
//! `Complex<T>` whose real type is a `num` numeric type. In practice that
//! means `Complex<f64>`, `Complex<f32>` and the Gaussian rationals
//! `Complex<BigRational>`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::complex::Complex64;
use num::{Complex, FromPrimitive, Num, One, ToPrimitive, Zero};
use num::traits::{Float, FloatConst};

/// A complex coefficient field usable by the group algebra and the graded
/// series ring.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Complex conjugate.
    fn conj(&self) -> Self;

    /// The real rational `num / den`.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Nearest double-precision complex value.
    fn to_c64(&self) -> Complex64;

    /// Whether arithmetic in this field is exact.
    fn is_exact() -> bool;

    /// The imaginary unit.
    fn i() -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }
}

/// Real types whose arithmetic rounds. Used to tell the float backends from
/// the exact one.
pub trait Rounding {
    const EXACT: bool;
}

impl Rounding for f32 {
    const EXACT: bool = false;
}
impl Rounding for f64 {
    const EXACT: bool = false;
}
impl Rounding for num::BigRational {
    const EXACT: bool = true;
}
impl Rounding for num::Rational64 {
    const EXACT: bool = true;
}

impl<T> Coeff for Complex<T>
where
    T: Clone
        + Num
        + Neg<Output = T>
        + ToPrimitive
        + FromPrimitive
        + Rounding
        + Debug
        + Send
        + Sync
        + 'static,
{
    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        let n = T::from_i64(num).expect("numerator representable");
        let d = T::from_i64(den).expect("denominator representable");
        Complex::new(n / d, T::zero())
    }

    fn i() -> Self {
        Complex::new(T::zero(), T::one())
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn is_exact() -> bool {
        T::EXACT
    }
}

/// Floating-point reals used by the quadrature and series code.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Exact Gaussian rational `a + bi` with `a, b ∈ ℚ`.
pub type GaussianRational = Complex<num::BigRational>;

/// Builds a Gaussian rational from two integer fractions.
pub fn gaussian(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
    use num::{BigInt, BigRational};
    Complex::new(
        BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
        BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactness_flags() {
        assert!(GaussianRational::is_exact());
        assert!(!Complex64::is_exact());
        assert!(!<Complex<f32> as Coeff>::is_exact());
    }

    #[test]
    fn rational_construction() {
        let half = GaussianRational::from_ratio(1, 2);
        assert_eq!(half.clone() + half, GaussianRational::one());
        assert_eq!(gaussian((1, 3), (-2, 5)).to_c64(), Complex64::new(1.0 / 3.0, -0.4));
        assert_eq!(Coeff::conj(&gaussian((1, 1), (1, 1))), gaussian((1, 1), (-1, 1)));
    }
}
