//! Scalar abstraction shared by the analytical and Monte Carlo code.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the crate computes in: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in target float")
    }

    /// Conversion to `f64` for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("float converts to f64")
    }

    /// Tightest relative tolerance the adaptive quadrature can sensibly aim for.
    fn default_rel_tol() -> Self;
}

impl Real for f32 {
    fn default_rel_tol() -> Self {
        1e-5
    }
}

impl Real for f64 {
    fn default_rel_tol() -> Self {
        1e-9
    }
}

/// Converts a threshold in dB to a linear ratio.
pub fn db_to_linear<R: Real>(db: R) -> R {
    R::lit(10.0).powf(db / R::lit(10.0))
}

/// Converts a linear ratio to dB.
pub fn linear_to_db<R: Real>(linear: R) -> R {
    R::lit(10.0) * linear.log10()
}
