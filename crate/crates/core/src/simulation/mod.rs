//! Monte Carlo verification: static SINR coverage over independent PPP draws and
//! trajectory-level mobility through a fixed PPP executing the handover protocols.
//!
//! Work units (trials, trajectories) are seeded from `(master seed, index)` and
//! aggregated with integer counts, so results do not depend on scheduling.

mod mobile;
mod static_mc;
mod trajectory;

pub use mobile::{mobile_coverage_aggregate, mobile_coverage_along_trajectory, MobileCoverage};
pub use static_mc::{simulate_static_coverage, simulate_static_coverage_grid, StaticCoverageGrid};
pub use trajectory::{
    simulate_trajectories, simulate_trajectory, simulate_trajectory_in_window, CellVisit, LinkState, Segment,
    TrajectoryStats, TrajectoryTrace,
};

use crate::scalar::Real;

/// 95 % normal quantile.
const Z95: f64 = 1.96;

/// Success/trial counter; merges exactly across work units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tally {
    pub successes: u64,
    pub trials: u64,
}

impl Tally {
    pub fn record(&mut self, success: bool) {
        self.trials += 1;
        self.successes += u64::from(success);
    }

    pub fn merge(self, other: Tally) -> Tally {
        Tally {
            successes: self.successes + other.successes,
            trials: self.trials + other.trials,
        }
    }

    pub fn estimate<R: Real>(&self) -> CoverageEstimate<R> {
        CoverageEstimate::from_counts(self.successes, self.trials)
    }
}

/// Empirical coverage probability with a 95 % normal-approximation half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageEstimate<R> {
    pub probability: R,
    pub trials: u64,
    pub ci_halfwidth: R,
}

impl<R: Real> CoverageEstimate<R> {
    /// An empty tally yields probability 0 with `trials == 0`; check [`Self::is_empty`].
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        if trials == 0 {
            return Self {
                probability: R::zero(),
                trials: 0,
                ci_halfwidth: R::zero(),
            };
        }
        let p = successes as f64 / trials as f64;
        Self {
            probability: R::lit(p),
            trials,
            ci_halfwidth: R::lit(Z95 * (p * (1.0 - p) / trials as f64).sqrt()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.trials == 0
    }

    /// Whether `value` lies within the confidence half-width plus `allowance`.
    pub fn agrees_with(&self, value: R, allowance: R) -> bool {
        (self.probability - value).abs() <= self.ci_halfwidth + allowance
    }
}

/// `d^{-η}` from a squared distance, with a fast path for `η = 4`.
#[inline]
pub(crate) fn path_gain<R: Real>(dist2: R, eta: R, eta_is_four: bool) -> R {
    if eta_is_four {
        (dist2 * dist2).recip()
    } else {
        dist2.powf(-eta / R::lit(2.0))
    }
}

/// Unit-mean exponential variate.
#[inline]
pub(crate) fn exp_fade<R: Real, G: rand::Rng>(rng: &mut G) -> R {
    // 1 - U lies in (0, 1], so the log is finite.
    R::lit(-(1.0 - rng.random::<f64>()).ln())
}
