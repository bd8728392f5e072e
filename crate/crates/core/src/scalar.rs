//! Real scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating point base type: `f32` or `f64`.
///
/// All matrices carry `Complex<T>` entries for some `T: Real`. Tolerances are
/// expressed in `T` as well, so single precision callers must pick tolerances
/// that are meaningful at roughly 1e-6.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Default + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if `Self` cannot represent finite doubles.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Default relative tolerance for rank, positivity and equality decisions.
    fn default_tol() -> Self;
}

impl Real for f32 {
    fn default_tol() -> Self {
        1e-5
    }
}

impl Real for f64 {
    fn default_tol() -> Self {
        1e-9
    }
}

/// Complex scalar over a [`Real`] base.
pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn cx<T: Real>(re: f64, im: f64) -> Cx<T> {
    Complex::new(T::lit(re), T::lit(im))
}

#[inline]
pub(crate) fn is_finite<T: Real>(z: &Cx<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
