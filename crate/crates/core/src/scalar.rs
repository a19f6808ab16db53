//! Scalar abstraction shared by every numeric routine in the crate.

use nalgebra::{Complex, DMatrix, DVector, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar the library is generic over (`f32` or `f64`).
///
/// Everything that needs square roots, SVDs or Hermitian eigensolvers goes
/// through nalgebra's `RealField`; conversions to and from literals use
/// num-traits.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {
    /// Converts an `f64` literal. Panics only for a scalar type that cannot
    /// represent finite `f64` values, which none of the supported ones is.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("scalar type cannot represent f64 literal")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T: RealField + Copy + FromPrimitive + ToPrimitive> Real for T {}

pub type C<T> = Complex<T>;
pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type RVector<T> = DVector<T>;

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub fn creal<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

/// `max(tol, 64 ε)`: absolute tolerance literal clamped to what the scalar
/// type can resolve.
#[inline]
pub fn tolerance<T: Real>(tol: f64) -> T {
    T::lit(tol).max(T::default_epsilon() * T::lit(64.0))
}
