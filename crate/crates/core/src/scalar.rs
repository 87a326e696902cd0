//! Scalar field abstraction shared by the real and complex paths.
//!
//! The Lanczos process is generic over [`Scalar`] so that a real symmetric
//! matrix with a real right-hand side runs its matrix-vector products, dot
//! products and vector updates entirely in `f64`. Shifted quantities are
//! always complex.
//!
//! Two products appear throughout the crate and must not be confused:
//!
//! * the bilinear product `uᵀv = Σ uᵢvᵢ` (no conjugation), which drives the
//!   complex symmetric Lanczos process, and
//! * the Euclidean norm `‖v‖₂ = (vᴴv)^{1/2}`, used for residuals.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::DimensionMismatch;

pub type C64 = Complex64;

pub trait Scalar:
    Copy
    + Send
    + Sync
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + 'static
{
    /// `true` for the `f64` specialization.
    const IS_REAL: bool;

    fn zero() -> Self;
    fn from_real(x: f64) -> Self;
    fn to_complex(self) -> C64;
    /// `|z|²`
    fn abs_sqr(self) -> f64;
    fn abs(self) -> f64;
    /// Multiply by a real factor.
    fn scale(self, a: f64) -> Self;
    /// Principal square root. On the real path the argument is a sum of
    /// squares and therefore nonnegative.
    fn sqrt(self) -> Self;
    fn is_zero(self) -> bool;

    /// View a slice as complex, if this is the complex field.
    fn complex_slice(v: &[Self]) -> Option<&[C64]>;
    fn complex_slice_mut(v: &mut [Self]) -> Option<&mut [C64]>;
    /// Narrow a complex value to this field; `None` if information would be lost.
    fn from_complex(z: C64) -> Option<Self>;
}

impl Scalar for f64 {
    const IS_REAL: bool = true;

    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_complex(self) -> C64 {
        C64::new(self, 0.0)
    }
    #[inline]
    fn abs_sqr(self) -> f64 {
        self * self
    }
    #[inline]
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    #[inline]
    fn scale(self, a: f64) -> Self {
        self * a
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn is_zero(self) -> bool {
        self == 0.0
    }
    fn complex_slice(_: &[Self]) -> Option<&[C64]> {
        None
    }
    fn complex_slice_mut(_: &mut [Self]) -> Option<&mut [C64]> {
        None
    }
    fn from_complex(z: C64) -> Option<Self> {
        (z.im == 0.0).then_some(z.re)
    }
}

impl Scalar for C64 {
    const IS_REAL: bool = false;

    #[inline]
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        C64::new(x, 0.0)
    }
    #[inline]
    fn to_complex(self) -> C64 {
        self
    }
    #[inline]
    fn abs_sqr(self) -> f64 {
        self.norm_sqr()
    }
    #[inline]
    fn abs(self) -> f64 {
        self.norm()
    }
    #[inline]
    fn scale(self, a: f64) -> Self {
        self * a
    }
    #[inline]
    fn sqrt(self) -> Self {
        principal_sqrt(self)
    }
    #[inline]
    fn is_zero(self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn complex_slice(v: &[Self]) -> Option<&[C64]> {
        Some(v)
    }
    fn complex_slice_mut(v: &mut [Self]) -> Option<&mut [C64]> {
        Some(v)
    }
    fn from_complex(z: C64) -> Option<Self> {
        Some(z)
    }
}

/// Principal-branch square root: arg in (−π, π], result has `Re ≥ 0`.
///
/// The negative real axis maps to the positive imaginary axis regardless of
/// the sign of a zero imaginary part, so `sqrt(-1 - 0i) = +i`.
pub fn principal_sqrt(z: C64) -> C64 {
    if z.im == 0.0 {
        if z.re >= 0.0 {
            C64::new(z.re.sqrt(), 0.0)
        } else {
            C64::new(0.0, (-z.re).sqrt())
        }
    } else {
        let s = z.sqrt();
        if s.re < 0.0 {
            -s
        } else {
            s
        }
    }
}

/// Unconjugated product `uᵀv`.
pub fn bilinear_dot<S: Scalar>(u: &[S], v: &[S]) -> Result<S, DimensionMismatch> {
    DimensionMismatch::check(u.len(), v.len())?;
    Ok(bilinear_dot_unchecked(u, v))
}

#[inline]
pub(crate) fn bilinear_dot_unchecked<S: Scalar>(u: &[S], v: &[S]) -> S {
    let mut acc = S::zero();
    for (&a, &b) in u.iter().zip(v) {
        acc += a * b;
    }
    acc
}

/// Conjugated product `uᴴv`, kept for contrast with [`bilinear_dot`].
pub fn hermitian_dot(u: &[C64], v: &[C64]) -> Result<C64, DimensionMismatch> {
    DimensionMismatch::check(u.len(), v.len())?;
    Ok(u.iter().zip(v).map(|(a, b)| a.conj() * b).sum())
}

/// Euclidean norm `(vᴴv)^{1/2}`.
pub fn norm2<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(|z| z.abs_sqr()).sum::<f64>().sqrt()
}

pub fn is_real_vector(v: &[C64]) -> bool {
    v.iter().all(|z| z.im == 0.0)
}
