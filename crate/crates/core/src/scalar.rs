//! Scalar abstraction shared by the numeric modules.
//!
//! Everything that touches floating point (operator coefficients, matrices,
//! eigenvalues, closed-form energies) is generic over [`Real`]. Complex values
//! are always `Complex<T>` for some `T: Real`.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use twofloat::TwoFloat;

/// Real scalar usable throughout the crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Literals are always finite.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    /// Lossy conversion used for reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Unit roundoff.
    fn eps() -> Self {
        Self::epsilon()
    }
}

impl Real for f32 {}
impl Real for f64 {}
// twofloat leaves `from_f64` to the num-traits default, which goes through
// `i64` and truncates, and its `epsilon` is the smallest normal number
impl Real for TwoFloat {
    fn lit(v: f64) -> Self {
        TwoFloat::from(v)
    }

    fn as_f64(self) -> f64 {
        self.hi() + self.lo()
    }

    fn eps() -> Self {
        TwoFloat::from(f64::EPSILON * f64::EPSILON / 2.0)
    }
}

/// Builds `re + i im`.
pub fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// `|re| + |im|`, the cheap modulus used in deflation tests and pivoting.
pub fn abs1<T: Real>(z: Complex<T>) -> T {
    z.re.abs() + z.im.abs()
}

/// Lossy conversion of a complex value to `Complex<f64>`.
pub fn to_c64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.as_f64(), z.im.as_f64())
}

/// Converts a `Complex<f64>` into another precision.
pub fn from_c64<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::lit(z.re), T::lit(z.im))
}
