use super::coverage::coverage;
use super::{CoverageState, HoScheme, NetworkParams};
use crate::error::{Error, Result};
use crate::quadrature::{try_integrate_to_infinity, QuadratureSettings};
use crate::roots::first_nonnegative;
use crate::scalar::Real;

/// Upper end of the crossover search, km/h.
pub const DEFAULT_MAX_VELOCITY_KMH: f64 = 300.0;

const SECONDS_PER_HOUR: f64 = 3600.0;

/// Ergodic rate `∫₀^∞ C(t) / (1 + t) dt` in nats/s/Hz.
///
/// Evaluated as `∫₀^∞ C(e^z - 1) dz`, which converts the algebraic tail in `t`
/// into an exponential one in `z`.
pub fn spectral_efficiency<R, F>(coverage_fn: F, quad: &QuadratureSettings<R>) -> Result<R>
where
    R: Real,
    F: Fn(R) -> Result<R>,
{
    let est = try_integrate_to_infinity(
        |z: R| {
            let t = z.exp_m1();
            if !(t > R::zero()) {
                return Ok(R::one());
            }
            if !t.is_finite() {
                return Ok(R::zero());
            }
            coverage_fn(t)
        },
        R::zero(),
        quad,
    )?;
    Ok(est.value)
}

/// `(R_c + R_bk) / 2`: a skipping user spends half its time in each state.
pub fn spectral_efficiency_skipping<R: Real>(r_connected: R, r_blackout: R) -> Result<R> {
    if !(r_connected >= R::zero()) {
        return Err(Error::invalid(
            "r_connected",
            format!("must be non-negative, got {r_connected}"),
        ));
    }
    if !(r_blackout >= R::zero()) {
        return Err(Error::invalid(
            "r_blackout",
            format!("must be non-negative, got {r_blackout}"),
        ));
    }
    Ok((r_connected + r_blackout) / R::lit(2.0))
}

/// Spectral efficiency per link state, in nats/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEfficiencies<R> {
    pub connected: R,
    pub blackout: R,
    pub blackout_ic: R,
}

impl<R: Real> SpectralEfficiencies<R> {
    /// Time-averaged efficiency seen under `scheme`.
    pub fn for_scheme(&self, scheme: HoScheme) -> R {
        let half = R::lit(0.5);
        match scheme {
            HoScheme::Conventional => self.connected,
            HoScheme::Skipping => half * (self.connected + self.blackout),
            HoScheme::SkippingIC => half * (self.connected + self.blackout_ic),
        }
    }
}

pub fn spectral_efficiencies<R: Real>(
    params: &NetworkParams<R>,
    quad: &QuadratureSettings<R>,
) -> Result<SpectralEfficiencies<R>> {
    params.validate()?;
    let se = |state| spectral_efficiency(|t| coverage(state, t, params, quad), quad);
    Ok(SpectralEfficiencies {
        connected: se(CoverageState::Connected)?,
        blackout: se(CoverageState::Blackout)?,
        blackout_ic: se(CoverageState::BlackoutIc)?,
    })
}

fn check_mobility<R: Real>(velocity_kmh: R, lambda: R) -> Result<()> {
    if !(velocity_kmh >= R::zero()) || !velocity_kmh.is_finite() {
        return Err(Error::invalid(
            "velocity",
            format!("must be non-negative, got {velocity_kmh}"),
        ));
    }
    if !(lambda > R::zero()) {
        return Err(Error::invalid("lambda", format!("must be positive, got {lambda}")));
    }
    Ok(())
}

/// Cell-boundary crossings per hour, `4v√λ/π`, for `v` in km/h and `λ` in BS/km².
pub fn ho_rate<R: Real>(velocity_kmh: R, lambda: R) -> Result<R> {
    check_mobility(velocity_kmh, lambda)?;
    Ok(R::lit(4.0) * velocity_kmh * lambda.sqrt() / R::PI())
}

/// Fraction of time lost to handover signalling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoCost<R> {
    pub fraction: R,
    /// Set when `fraction ≥ 1`: the user would spend all its time in handover.
    pub saturated: bool,
}

/// `D_HO = H(v) d` for conventional handover, half that when skipping.
pub fn ho_cost<R: Real>(scheme: HoScheme, velocity_kmh: R, lambda: R, ho_delay_s: R) -> Result<HoCost<R>> {
    if !(ho_delay_s >= R::zero()) || !ho_delay_s.is_finite() {
        return Err(Error::invalid(
            "ho_delay_s",
            format!("must be non-negative, got {ho_delay_s}"),
        ));
    }
    let per_hour = ho_rate(velocity_kmh, lambda)?;
    let executed = if scheme.skips() {
        per_hour / R::lit(2.0)
    } else {
        per_hour
    };
    let fraction = executed * ho_delay_s / R::lit(SECONDS_PER_HOUR);
    Ok(HoCost {
        fraction,
        saturated: fraction >= R::one(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Throughput<R> {
    /// `W R (1 - u_c)(1 - D_HO)` with `R` in nats/s/Hz, clamped at zero.
    pub nats_per_s: R,
    pub ho_cost: HoCost<R>,
    pub spectral_efficiency: R,
}

impl<R: Real> Throughput<R> {
    pub fn saturated(&self) -> bool {
        self.ho_cost.saturated
    }

    pub fn bits_per_s(&self) -> R {
        self.nats_per_s / R::LN_2()
    }
}

/// Average throughput from precomputed spectral efficiencies.
pub fn average_throughput_from<R: Real>(
    efficiencies: &SpectralEfficiencies<R>,
    params: &NetworkParams<R>,
    scheme: HoScheme,
    velocity_kmh: R,
) -> Result<Throughput<R>> {
    let cost = ho_cost(scheme, velocity_kmh, params.lambda, params.ho_delay_s)?;
    let se = efficiencies.for_scheme(scheme);
    let value = if cost.saturated {
        R::zero()
    } else {
        params.bandwidth_hz * se * (R::one() - params.overhead_fraction(scheme)) * (R::one() - cost.fraction)
    };
    Ok(Throughput {
        nats_per_s: value,
        ho_cost: cost,
        spectral_efficiency: se,
    })
}

pub fn average_throughput<R: Real>(
    params: &NetworkParams<R>,
    scheme: HoScheme,
    velocity_kmh: R,
    quad: &QuadratureSettings<R>,
) -> Result<Throughput<R>> {
    let eff = spectral_efficiencies(params, quad)?;
    average_throughput_from(&eff, params, scheme, velocity_kmh)
}

/// Smallest velocity in `(0, v_max]` at which `scheme_b` delivers at least the
/// throughput of `scheme_a`, or `None` if it never does.
pub fn crossover_velocity_from<R: Real>(
    efficiencies: &SpectralEfficiencies<R>,
    params: &NetworkParams<R>,
    scheme_a: HoScheme,
    scheme_b: HoScheme,
    v_max: R,
) -> Result<Option<R>> {
    params.validate()?;
    if !(v_max > R::zero()) {
        return Err(Error::invalid("v_max", format!("must be positive, got {v_max}")));
    }
    let gap = |v: R| -> R {
        let a = average_throughput_from(efficiencies, params, scheme_a, v).map(|t| t.nats_per_s);
        let b = average_throughput_from(efficiencies, params, scheme_b, v).map(|t| t.nats_per_s);
        match (a, b) {
            (Ok(a), Ok(b)) => (b - a) / params.bandwidth_hz,
            _ => R::nan(),
        }
    };
    // Start just above zero so a tie at standstill is not reported as a crossing.
    let start = v_max * R::lit(1e-9);
    let steps = (v_max.as_f64().ceil() as usize).clamp(16, 10_000);
    Ok(first_nonnegative(
        gap,
        start,
        v_max,
        steps,
        R::lit(1e-9) * v_max.max(R::one()),
    ))
}

pub fn crossover_velocity<R: Real>(
    params: &NetworkParams<R>,
    scheme_a: HoScheme,
    scheme_b: HoScheme,
    quad: &QuadratureSettings<R>,
) -> Result<Option<R>> {
    let eff = spectral_efficiencies(params, quad)?;
    crossover_velocity_from(&eff, params, scheme_a, scheme_b, R::lit(DEFAULT_MAX_VELOCITY_KMH))
}
