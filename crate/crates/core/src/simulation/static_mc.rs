use rayon::prelude::*;

use super::{exp_fade, path_gain, CoverageEstimate, Tally};
use crate::analysis::{CoverageState, NetworkParams};
use crate::error::{Error, Result};
use crate::geometry::{default_window_radius, derive_seed, rng_from_seed, sample_ppp_with_min_points, Point2};
use crate::scalar::Real;

const FADING_STREAM: u64 = 0xFADE;

/// Coverage estimates for every (state, threshold) pair, sharing PPP draws across pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticCoverageGrid<R> {
    pub states: Vec<CoverageState>,
    pub thresholds: Vec<R>,
    /// `estimates[state_index][threshold_index]`
    pub estimates: Vec<Vec<CoverageEstimate<R>>>,
    /// Draws discarded because the window held fewer than two BSs.
    pub resamples: u64,
    pub window_radius: R,
}

impl<R: Real> StaticCoverageGrid<R> {
    pub fn get(&self, state: CoverageState, threshold_index: usize) -> Option<&CoverageEstimate<R>> {
        let si = self.states.iter().position(|&s| s == state)?;
        self.estimates.get(si)?.get(threshold_index)
    }
}

/// SINR of the three link states at the origin for one realization.
struct Sinrs<R> {
    connected: R,
    blackout: R,
    blackout_ic: R,
}

fn trial_sinrs<R: Real>(points: &[Point2<R>], params: &NetworkParams<R>, seed: u64) -> Sinrs<R> {
    let mut rng = rng_from_seed(derive_seed(seed, FADING_STREAM));
    let eta4 = params.eta == R::lit(4.0);
    let origin = Point2::origin();

    let (mut a, mut b) = (usize::MAX, usize::MAX);
    let (mut da, mut db) = (R::infinity(), R::infinity());
    let (mut rx_a, mut rx_b) = (R::zero(), R::zero());
    let mut rest = R::zero();
    for (i, p) in points.iter().enumerate() {
        let d2 = p.dist2(&origin);
        let rx = params.power * exp_fade::<R, _>(&mut rng) * path_gain(d2, params.eta, eta4);
        if d2 < da {
            if b != usize::MAX {
                rest = rest + rx_b;
            }
            b = a;
            db = da;
            rx_b = rx_a;
            a = i;
            da = d2;
            rx_a = rx;
        } else if d2 < db {
            if b != usize::MAX {
                rest = rest + rx_b;
            }
            b = i;
            db = d2;
            rx_b = rx;
        } else {
            rest = rest + rx;
        }
    }
    debug_assert!(a != usize::MAX && b != usize::MAX);

    let noise = params.noise;
    Sinrs {
        connected: rx_a / (rx_b + rest + noise),
        blackout: rx_b / (rx_a + rest + noise),
        blackout_ic: rx_b / (rest + noise),
    }
}

/// Monte Carlo coverage for all `states` × `thresholds` (linear), `trials` PPP draws each.
///
/// Each trial draws a fresh PPP, places the user at the origin and draws unit-mean
/// exponential fades for every BS. Draws with fewer than two BSs are resampled.
pub fn simulate_static_coverage_grid<R: Real>(
    states: &[CoverageState],
    thresholds: &[R],
    params: &NetworkParams<R>,
    trials: u64,
    seed: u64,
    window_radius: Option<R>,
) -> Result<StaticCoverageGrid<R>> {
    params.validate()?;
    if trials == 0 {
        return Err(Error::invalid("trials", "must be at least 1"));
    }
    if thresholds.iter().any(|t| !(*t > R::zero())) {
        return Err(Error::invalid("threshold", "thresholds must be positive"));
    }
    let radius = window_radius.unwrap_or_else(|| default_window_radius(params.lambda));
    let nt = thresholds.len();
    let cells = states.len() * nt;

    let (counts, resamples) = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<(Vec<u64>, u64)> {
            let trial_seed = derive_seed(seed, trial);
            let (pattern, resampled) = sample_ppp_with_min_points(params.lambda, radius, trial_seed, 2)?;
            let sinr = trial_sinrs(&pattern.points, params, pattern.seed);
            let mut hits = vec![0u64; cells];
            for (si, state) in states.iter().enumerate() {
                let s = match state {
                    CoverageState::Connected => sinr.connected,
                    CoverageState::Blackout => sinr.blackout,
                    CoverageState::BlackoutIc => sinr.blackout_ic,
                };
                for (ti, &t) in thresholds.iter().enumerate() {
                    hits[si * nt + ti] = u64::from(s >= t);
                }
            }
            Ok((hits, u64::from(resampled)))
        })
        .try_reduce(
            || (vec![0u64; cells], 0u64),
            |(mut acc, ra), (hits, rb)| {
                acc.iter_mut().zip(hits).for_each(|(a, h)| *a += h);
                Ok((acc, ra + rb))
            },
        )?;

    let estimates = (0..states.len())
        .map(|si| {
            (0..nt)
                .map(|ti| {
                    Tally {
                        successes: counts[si * nt + ti],
                        trials,
                    }
                    .estimate()
                })
                .collect()
        })
        .collect();

    Ok(StaticCoverageGrid {
        states: states.to_vec(),
        thresholds: thresholds.to_vec(),
        estimates,
        resamples,
        window_radius: radius,
    })
}

/// Monte Carlo coverage for one link state at linear threshold `t`.
pub fn simulate_static_coverage<R: Real>(
    state: CoverageState,
    t: R,
    params: &NetworkParams<R>,
    trials: u64,
    seed: u64,
) -> Result<CoverageEstimate<R>> {
    let grid = simulate_static_coverage_grid(&[state], &[t], params, trials, seed, None)?;
    Ok(grid.estimates[0][0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::closed_form::*;

    #[test]
    fn deterministic_replay() {
        let p = NetworkParams::<f64>::default();
        let a = simulate_static_coverage(CoverageState::Connected, 1.0, &p, 2000, 5).unwrap();
        let b = simulate_static_coverage(CoverageState::Connected, 1.0, &p, 2000, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_zero_trials() {
        let p = NetworkParams::<f64>::default();
        assert!(simulate_static_coverage(CoverageState::Connected, 1.0, &p, 0, 5).is_err());
    }

    #[test]
    fn sinr_against_hand_computation() {
        let p = NetworkParams::<f64>::default();
        let pts = [Point2::new(0.0, 2.0), Point2::new(1.0, 0.0), Point2::new(3.0, 0.0)];
        let s = trial_sinrs(&pts, &p, 11);
        // Recreate the fades in point order.
        let mut rng = rng_from_seed(derive_seed(11, FADING_STREAM));
        let h: Vec<f64> = (0..3).map(|_| exp_fade(&mut rng)).collect();
        let rx = [h[0] / 16.0, h[1], h[2] / 81.0];
        assert!((s.connected - rx[1] / (rx[0] + rx[2])).abs() < 1e-12);
        assert!((s.blackout - rx[0] / (rx[1] + rx[2])).abs() < 1e-12);
        assert!((s.blackout_ic - rx[0] / rx[2]).abs() < 1e-12);
    }

    #[test]
    fn quick_agreement_with_closed_forms() {
        let p = NetworkParams::<f64>::default().with_lambda(10.0);
        let grid = simulate_static_coverage_grid(&CoverageState::ALL, &[1.0], &p, 20_000, 3, None).unwrap();
        let c = grid.get(CoverageState::Connected, 0).unwrap();
        let b = grid.get(CoverageState::Blackout, 0).unwrap();
        let ic = grid.get(CoverageState::BlackoutIc, 0).unwrap();
        assert!(c.agrees_with(coverage_connected_eta4(1.0), 0.005), "{c:?}");
        assert!(b.agrees_with(coverage_blackout_eta4(1.0), 0.005), "{b:?}");
        assert!(ic.agrees_with(coverage_blackout_ic_eta4(1.0), 0.005), "{ic:?}");
    }
}
