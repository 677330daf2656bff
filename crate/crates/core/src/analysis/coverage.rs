use super::laplace::{skipped_transform, vartheta};
use super::{check_threshold, CoverageState, NetworkParams};
use crate::error::Result;
use crate::quadrature::{integrate_to_infinity_scaled, QuadratureSettings};
use crate::scalar::Real;

/// `T σ² x^η / P`, the noise exponent at serving distance `x`.
fn noise_exponent<R: Real>(t: R, params: &NetworkParams<R>, x: R) -> R {
    if params.noise == R::zero() {
        R::zero()
    } else {
        t * params.noise * x.powf(params.eta) / params.power
    }
}

/// Coverage of a best-connected user,
/// `∫₀^∞ 2πλx exp(-Tσ²x^η/P - πλx²(1 + ϑ(T, η))) dx`.
pub fn coverage_connected<R: Real>(t: R, params: &NetworkParams<R>, quad: &QuadratureSettings<R>) -> Result<R> {
    params.validate()?;
    check_threshold(t)?;
    let theta = vartheta(t, params.eta, quad)?;
    let lp = params.lambda * R::PI();
    let two = R::lit(2.0);
    let est = integrate_to_infinity_scaled(
        |x: R| two * lp * x * (-noise_exponent(t, params, x) - lp * x * x * (R::one() + theta)).exp(),
        R::zero(),
        decay_length(lp, theta),
        quad,
    )?;
    Ok(est.value.min(R::one()))
}

/// Coverage of a blackout user whose skipped (nearest) BS interferes,
/// `4(λπ)² ∫₀^∞ y e^{-Tσ²y^η/P - λπy²(ϑ+1)} (∫₀^y x / (1 + T y^η x^{-η}) dx) dy`.
///
/// The inner integral equals `y² L₁(T, η) / 2` with `L₁` the skipped-BS transform.
pub fn coverage_blackout<R: Real>(t: R, params: &NetworkParams<R>, quad: &QuadratureSettings<R>) -> Result<R> {
    params.validate()?;
    check_threshold(t)?;
    let skipped = skipped_transform(t, params.eta, quad)?;
    Ok((blackout_outer(t, params, quad)? * skipped).min(R::one()))
}

/// Coverage of a blackout user that cancels the skipped BS, `1 / (1 + ϑ(T, η))²`.
pub fn coverage_blackout_ic<R: Real>(t: R, eta: R, quad: &QuadratureSettings<R>) -> Result<R> {
    let theta = vartheta(t, eta, quad)?;
    let d = R::one() + theta;
    Ok((d * d).recip())
}

/// Blackout coverage with cancellation when noise is present,
/// `2(λπ)² ∫₀^∞ y³ e^{-Tσ²y^η/P - λπy²(ϑ+1)} dy`; reduces to
/// [`coverage_blackout_ic`] for `σ² = 0`.
pub fn coverage_blackout_ic_with_noise<R: Real>(
    t: R,
    params: &NetworkParams<R>,
    quad: &QuadratureSettings<R>,
) -> Result<R> {
    params.validate()?;
    check_threshold(t)?;
    Ok(blackout_outer(t, params, quad)?.min(R::one()))
}

/// Distance over which `exp(-πλx²(1 + ϑ))` decays.
fn decay_length<R: Real>(lp: R, theta: R) -> R {
    (lp * (R::one() + theta)).sqrt().recip()
}

fn blackout_outer<R: Real>(t: R, params: &NetworkParams<R>, quad: &QuadratureSettings<R>) -> Result<R> {
    let theta = vartheta(t, params.eta, quad)?;
    let lp = params.lambda * R::PI();
    let two = R::lit(2.0);
    let est = integrate_to_infinity_scaled(
        |y: R| two * lp * lp * y * y * y * (-noise_exponent(t, params, y) - lp * y * y * (R::one() + theta)).exp(),
        R::zero(),
        decay_length(lp, theta),
        quad,
    )?;
    Ok(est.value)
}

/// Coverage in the given link state, including noise for the cancelling variant.
pub fn coverage<R: Real>(
    state: CoverageState,
    t: R,
    params: &NetworkParams<R>,
    quad: &QuadratureSettings<R>,
) -> Result<R> {
    match state {
        CoverageState::Connected => coverage_connected(t, params, quad),
        CoverageState::Blackout => coverage_blackout(t, params, quad),
        CoverageState::BlackoutIc => coverage_blackout_ic_with_noise(t, params, quad),
    }
}
