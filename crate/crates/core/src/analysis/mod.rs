//! Analytical model: service-distance laws, interference Laplace transforms,
//! coverage, spectral efficiency, handover cost and average throughput.
//!
//! Every integral form is evaluated by adaptive quadrature for a general
//! path-loss exponent; [`closed_form`] holds the `η = 4`, noise-free reductions
//! used to cross-check them.

pub mod closed_form;
mod coverage;
mod distance;
mod laplace;
mod rate;

pub use coverage::{
    coverage, coverage_blackout, coverage_blackout_ic, coverage_blackout_ic_with_noise, coverage_connected,
};
pub use distance::{
    conditional_pdf_skipped, joint_pdf_blackout, marginal_pdf_blackout_serving, pdf_service_distance_connected,
};
pub use laplace::{laplace_interference_outer, laplace_interference_skipped, vartheta};
pub use rate::{
    average_throughput, average_throughput_from, crossover_velocity, crossover_velocity_from, ho_cost, ho_rate,
    spectral_efficiencies, spectral_efficiency, spectral_efficiency_skipping, HoCost, SpectralEfficiencies, Throughput,
    DEFAULT_MAX_VELOCITY_KMH,
};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Network and link-budget parameters.
///
/// Units: `lambda` in BS/km², `ho_delay_s` in seconds, `bandwidth_hz` in Hz.
/// `power` and `noise` share one normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkParams<R> {
    pub lambda: R,
    pub power: R,
    pub eta: R,
    pub noise: R,
    pub bandwidth_hz: R,
    /// Control-overhead fraction under conventional handover.
    pub overhead_conventional: R,
    /// Control-overhead fraction under either skipping variant.
    pub overhead_skipping: R,
    pub ho_delay_s: R,
}

impl<R: Real> Default for NetworkParams<R> {
    /// Unit power, `η = 4`, interference limited, 10 MHz, 0.3/0.15 overhead, 0.7 s delay, 30 BS/km².
    fn default() -> Self {
        Self {
            lambda: R::lit(30.0),
            power: R::one(),
            eta: R::lit(4.0),
            noise: R::zero(),
            bandwidth_hz: R::lit(10e6),
            overhead_conventional: R::lit(0.3),
            overhead_skipping: R::lit(0.15),
            ho_delay_s: R::lit(0.7),
        }
    }
}

impl<R: Real> NetworkParams<R> {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > R::zero()) || !self.lambda.is_finite() {
            return Err(Error::invalid(
                "lambda",
                format!("must be positive, got {}", self.lambda),
            ));
        }
        if !(self.power > R::zero()) || !self.power.is_finite() {
            return Err(Error::invalid("power", format!("must be positive, got {}", self.power)));
        }
        check_eta(self.eta)?;
        if !(self.noise >= R::zero()) || !self.noise.is_finite() {
            return Err(Error::invalid(
                "noise",
                format!("must be non-negative, got {}", self.noise),
            ));
        }
        if !(self.bandwidth_hz > R::zero()) || !self.bandwidth_hz.is_finite() {
            return Err(Error::invalid(
                "bandwidth_hz",
                format!("must be positive, got {}", self.bandwidth_hz),
            ));
        }
        for (name, u) in [
            ("overhead_conventional", self.overhead_conventional),
            ("overhead_skipping", self.overhead_skipping),
        ] {
            if !(u >= R::zero() && u < R::one()) {
                return Err(Error::invalid(name, format!("must lie in [0, 1), got {u}")));
            }
        }
        if !(self.ho_delay_s >= R::zero()) || !self.ho_delay_s.is_finite() {
            return Err(Error::invalid(
                "ho_delay_s",
                format!("must be non-negative, got {}", self.ho_delay_s),
            ));
        }
        Ok(())
    }

    pub fn overhead_fraction(&self, scheme: HoScheme) -> R {
        match scheme {
            HoScheme::Conventional => self.overhead_conventional,
            HoScheme::Skipping | HoScheme::SkippingIC => self.overhead_skipping,
        }
    }

    pub fn with_lambda(mut self, lambda: R) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_noise(mut self, noise: R) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_eta(mut self, eta: R) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_ho_delay(mut self, ho_delay_s: R) -> Self {
        self.ho_delay_s = ho_delay_s;
        self
    }
}

/// Association protocol along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HoScheme {
    /// Hand over at every cell boundary.
    Conventional,
    /// Skip every other handover; the skipped BS interferes.
    Skipping,
    /// Skip every other handover; the skipped BS is cancelled.
    SkippingIC,
}

impl HoScheme {
    pub const ALL: [HoScheme; 3] = [HoScheme::Conventional, HoScheme::Skipping, HoScheme::SkippingIC];

    pub fn name(self) -> &'static str {
        match self {
            HoScheme::Conventional => "conventional",
            HoScheme::Skipping => "skipping",
            HoScheme::SkippingIC => "skipping_ic",
        }
    }

    pub fn skips(self) -> bool {
        !matches!(self, HoScheme::Conventional)
    }
}

impl fmt::Display for HoScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HoScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "conventional" => Ok(HoScheme::Conventional),
            "skipping" => Ok(HoScheme::Skipping),
            "skipping_ic" | "skippingic" => Ok(HoScheme::SkippingIC),
            other => Err(Error::invalid("scheme", format!("unknown scheme `{other}`"))),
        }
    }
}

/// Link state of a user, which fixes the serving BS and the interferer set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoverageState {
    /// Served by the nearest BS.
    Connected,
    /// Served by the second-nearest BS; the nearest interferes.
    Blackout,
    /// Served by the second-nearest BS; the nearest is cancelled.
    BlackoutIc,
}

impl CoverageState {
    pub const ALL: [CoverageState; 3] = [
        CoverageState::Connected,
        CoverageState::Blackout,
        CoverageState::BlackoutIc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CoverageState::Connected => "connected",
            CoverageState::Blackout => "blackout",
            CoverageState::BlackoutIc => "blackout_ic",
        }
    }
}

impl fmt::Display for CoverageState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoverageState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "connected" => Ok(CoverageState::Connected),
            "blackout" => Ok(CoverageState::Blackout),
            "blackout_ic" => Ok(CoverageState::BlackoutIc),
            other => Err(Error::invalid("scheme_state", format!("unknown state `{other}`"))),
        }
    }
}

pub(crate) fn check_eta<R: Real>(eta: R) -> Result<()> {
    if !(eta > R::lit(2.0)) || !eta.is_finite() {
        return Err(Error::DivergentIntegral { eta: eta.as_f64() });
    }
    Ok(())
}

pub(crate) fn check_threshold<R: Real>(t: R) -> Result<()> {
    if !(t > R::zero()) || !t.is_finite() {
        return Err(Error::invalid(
            "threshold",
            format!("must be positive and finite, got {t}"),
        ));
    }
    Ok(())
}
