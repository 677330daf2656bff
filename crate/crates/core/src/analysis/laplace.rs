use super::{check_eta, check_threshold};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_breaks, QuadratureSettings};
use crate::scalar::Real;

/// Interference integral `ϑ(T, η) = T^{2/η} ∫_{T^{-2/η}}^∞ dw / (1 + w^{η/2})`.
///
/// The tail is folded onto `(0, 1]` with `w = T^{-2/η} y^{-4/(η-2)}`, which turns
/// the integral into `m T ∫₀¹ y / (1 + T y^q) dy` with `m = 4/(η-2)` and
/// `q = 2η/(η-2)`. The integrand is bounded for every admissible `η`.
pub fn vartheta<R: Real>(t: R, eta: R, quad: &QuadratureSettings<R>) -> Result<R> {
    check_eta(eta)?;
    check_threshold(t)?;
    let two = R::lit(2.0);
    let m = R::lit(4.0) / (eta - two);
    let q = two * eta / (eta - two);
    // The integrand peaks near T y^q = 1 and decays as a power law above it;
    // geometric panels keep each piece well resolved for large T.
    let mut breaks = Vec::new();
    let mut b = t.powf(-q.recip());
    while b < R::one() {
        breaks.push(b);
        b = b * R::lit(4.0);
    }
    let est = integrate_with_breaks(
        |y: R| y / (R::one() + t * y.powf(q)),
        R::zero(),
        R::one(),
        &breaks,
        quad,
    )?;
    Ok(m * t * est.value)
}

/// Laplace transform of the interference from BSs outside the serving distance:
/// `exp(-πλ r0² ϑ(T, η))`.
pub fn laplace_interference_outer<R: Real>(t: R, eta: R, r0: R, lambda: R, quad: &QuadratureSettings<R>) -> Result<R> {
    if !(r0 >= R::zero()) {
        return Err(Error::invalid("r0", format!("must be non-negative, got {r0}")));
    }
    if !(lambda > R::zero()) {
        return Err(Error::invalid("lambda", format!("must be positive, got {lambda}")));
    }
    let theta = vartheta(t, eta, quad)?;
    Ok((-R::PI() * lambda * r0 * r0 * theta).exp())
}

/// Laplace transform of the skipped-BS interference,
/// `∫₀^{r0} 2r / (r0² (1 + T r0^η r^{-η})) dr`.
///
/// With `u = r / r0` this is `∫₀¹ 2u^{η+1} / (u^η + T) du`, independent of `r0`.
pub fn laplace_interference_skipped<R: Real>(t: R, eta: R, r0: R, quad: &QuadratureSettings<R>) -> Result<R> {
    if !(r0 > R::zero()) {
        return Err(Error::invalid("r0", format!("must be positive, got {r0}")));
    }
    skipped_transform(t, eta, quad)
}

pub(crate) fn skipped_transform<R: Real>(t: R, eta: R, quad: &QuadratureSettings<R>) -> Result<R> {
    check_eta(eta)?;
    check_threshold(t)?;
    let two = R::lit(2.0);
    let knee = t.powf(eta.recip());
    let est = integrate_with_breaks(
        |u: R| {
            let ue = u.powf(eta);
            two * u * ue / (ue + t)
        },
        R::zero(),
        R::one(),
        &[knee],
        quad,
    )?;
    Ok(est.value)
}
