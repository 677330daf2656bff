//! Noise-free `η = 4` reductions of the interference transforms and coverage laws.

use crate::scalar::Real;

/// `√T·arctan(√T)`.
pub fn vartheta_eta4<R: Real>(t: R) -> R {
    let s = t.sqrt();
    s * s.atan()
}

pub fn laplace_outer_eta4<R: Real>(t: R, r0: R, lambda: R) -> R {
    (-R::PI() * lambda * r0 * r0 * vartheta_eta4(t)).exp()
}

/// `1 - √T·arctan(1/√T)`.
pub fn laplace_skipped_eta4<R: Real>(t: R) -> R {
    let s = t.sqrt();
    R::one() - s * s.recip().atan()
}

pub fn coverage_connected_eta4<R: Real>(t: R) -> R {
    (R::one() + vartheta_eta4(t)).recip()
}

pub fn coverage_blackout_eta4<R: Real>(t: R) -> R {
    let d = R::one() + vartheta_eta4(t);
    laplace_skipped_eta4(t) / (d * d)
}

pub fn coverage_blackout_ic_eta4<R: Real>(t: R) -> R {
    let d = R::one() + vartheta_eta4(t);
    (d * d).recip()
}
