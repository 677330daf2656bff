use rayon::prelude::*;

use super::trajectory::{simulate_trajectory, LinkState, TrajectoryTrace};
use super::{exp_fade, path_gain, CoverageEstimate, Tally};
use crate::analysis::{HoScheme, NetworkParams};
use crate::error::{Error, Result};
use crate::geometry::{derive_seed, rng_from_seed, two_nearest};
use crate::scalar::Real;

/// Coverage tallies of SINR samples taken along trajectories, split by link state.
///
/// Blackout samples are scored twice: against the BS the protocol actually
/// retains, and against the second-nearest BS that the analytical model assumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MobileCoverage {
    /// Connected and in-handover samples (both are served by the nearest BS).
    pub connected: Tally,
    pub blackout: Tally,
    pub blackout_ic: Tally,
    pub blackout_second_nearest: Tally,
    pub blackout_second_nearest_ic: Tally,
    pub in_handover_samples: u64,
    /// Blackout samples whose retained BS is also the second nearest.
    pub retained_is_second_nearest: Tally,
}

impl MobileCoverage {
    pub fn merge(self, o: MobileCoverage) -> MobileCoverage {
        MobileCoverage {
            connected: self.connected.merge(o.connected),
            blackout: self.blackout.merge(o.blackout),
            blackout_ic: self.blackout_ic.merge(o.blackout_ic),
            blackout_second_nearest: self.blackout_second_nearest.merge(o.blackout_second_nearest),
            blackout_second_nearest_ic: self.blackout_second_nearest_ic.merge(o.blackout_second_nearest_ic),
            in_handover_samples: self.in_handover_samples + o.in_handover_samples,
            retained_is_second_nearest: self.retained_is_second_nearest.merge(o.retained_is_second_nearest),
        }
    }

    pub fn samples(&self) -> u64 {
        self.connected.trials + self.blackout.trials
    }

    pub fn connected_estimate<R: Real>(&self) -> CoverageEstimate<R> {
        self.connected.estimate()
    }

    pub fn blackout_estimate<R: Real>(&self) -> CoverageEstimate<R> {
        self.blackout.estimate()
    }

    pub fn blackout_second_nearest_estimate<R: Real>(&self) -> CoverageEstimate<R> {
        self.blackout_second_nearest.estimate()
    }
}

/// Samples SINR at equally spaced points of `trace` (`(k + ½)·spacing`), with
/// fresh fading per sample, and scores each against threshold `t` (linear).
pub fn mobile_coverage_along_trajectory<R: Real>(
    trace: &TrajectoryTrace<R>,
    t: R,
    sample_spacing_km: R,
    seed: u64,
) -> Result<MobileCoverage> {
    if !(sample_spacing_km > R::zero()) {
        return Err(Error::invalid(
            "sample_spacing_km",
            format!("must be positive, got {sample_spacing_km}"),
        ));
    }
    if !(t > R::zero()) {
        return Err(Error::invalid("threshold", format!("must be positive, got {t}")));
    }
    let n = (trace.length_km / sample_spacing_km).floor().to_usize().unwrap_or(0);
    if n == 0 {
        return Err(Error::NoSamples(format!(
            "spacing {sample_spacing_km} km exceeds path length {} km",
            trace.length_km
        )));
    }

    let params = &trace.params;
    let eta4 = params.eta == R::lit(4.0);
    let points = &trace.pattern.points;
    let mut rng = rng_from_seed(seed);
    let mut dist2 = vec![R::zero(); points.len()];
    let mut rx = vec![R::zero(); points.len()];
    let mut out = MobileCoverage::default();
    let half = R::lit(0.5);

    for k in 0..n {
        let s = (R::from_usize(k).unwrap() + half) * sample_spacing_km;
        let Some(seg) = trace.segment_at(s) else { continue };
        let at = trace.position_at(s);
        let mut total = R::zero();
        for (i, p) in points.iter().enumerate() {
            let d2 = p.dist2(&at);
            dist2[i] = d2;
            rx[i] = params.power * exp_fade::<R, _>(&mut rng) * path_gain(d2, params.eta, eta4);
            total = total + rx[i];
        }
        let (nearest, second) = two_nearest(&dist2).expect("trajectory patterns hold at least two BSs");
        let sinr = |serving: usize, cancelled: Option<usize>| {
            let mut interference = total - rx[serving];
            if let Some(c) = cancelled {
                interference = interference - rx[c];
            }
            rx[serving] / (interference.max(R::zero()) + params.noise)
        };

        match seg.state {
            LinkState::Connected | LinkState::InHandover => {
                if seg.state == LinkState::InHandover {
                    out.in_handover_samples += 1;
                }
                out.connected.record(sinr(seg.serving, None) >= t);
            }
            LinkState::Blackout => {
                // The cell owner is the nearest BS and is the one being skipped.
                out.blackout.record(sinr(seg.serving, None) >= t);
                out.blackout_ic.record(sinr(seg.serving, Some(nearest)) >= t);
                out.blackout_second_nearest.record(sinr(second, None) >= t);
                out.blackout_second_nearest_ic.record(sinr(second, Some(nearest)) >= t);
                out.retained_is_second_nearest.record(seg.serving == second);
            }
        }
    }
    Ok(out)
}

/// Runs `count` trajectories and pools their along-path coverage samples.
#[allow(clippy::too_many_arguments)]
pub fn mobile_coverage_aggregate<R: Real>(
    params: &NetworkParams<R>,
    scheme: HoScheme,
    velocity_kmh: R,
    length_km: R,
    count: usize,
    t: R,
    sample_spacing_km: R,
    seed: u64,
) -> Result<MobileCoverage> {
    if count == 0 {
        return Err(Error::invalid("count", "must be at least 1"));
    }
    (0..count)
        .into_par_iter()
        .map(|i| {
            let unit = derive_seed(seed, i as u64);
            let trace = simulate_trajectory(params, velocity_kmh, length_km, scheme, derive_seed(unit, 0))?;
            mobile_coverage_along_trajectory(&trace, t, sample_spacing_km, derive_seed(unit, 1))
        })
        .try_reduce(MobileCoverage::default, |a, b| Ok(a.merge(b)))
}
