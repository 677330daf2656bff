//! Experiment configuration: a TOML file layered over built-in defaults, with
//! command-line flags layered over both.

use std::path::{Path, PathBuf};

use hoskip::{CoverageState, HoScheme, NetworkParams, QuadratureSettings, TailRule};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Static Monte Carlo trials per coverage point.
    pub trials: u64,
    pub out: PathBuf,
    /// Add a Mbps column (nats converted to bits) to throughput output.
    pub bits: bool,
    pub network: NetworkSection,
    pub quadrature: QuadratureSection,
    pub coverage: CoverageSection,
    pub throughput: ThroughputSection,
    pub hocost: HoCostSection,
    pub validate: ValidateSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            trials: 100_000,
            out: PathBuf::from("runs/default"),
            bits: false,
            network: NetworkSection::default(),
            quadrature: QuadratureSection::default(),
            coverage: CoverageSection::default(),
            throughput: ThroughputSection::default(),
            hocost: HoCostSection::default(),
            validate: ValidateSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSection {
    pub lambda: f64,
    pub power: f64,
    pub eta: f64,
    pub noise: f64,
    pub bandwidth_hz: f64,
    pub overhead_conventional: f64,
    pub overhead_skipping: f64,
    pub ho_delay_s: f64,
}

impl Default for NetworkSection {
    fn default() -> Self {
        let p = NetworkParams::<f64>::default();
        Self {
            lambda: p.lambda,
            power: p.power,
            eta: p.eta,
            noise: p.noise,
            bandwidth_hz: p.bandwidth_hz,
            overhead_conventional: p.overhead_conventional,
            overhead_skipping: p.overhead_skipping,
            ho_delay_s: p.ho_delay_s,
        }
    }
}

impl NetworkSection {
    pub fn params(&self) -> NetworkParams<f64> {
        NetworkParams {
            lambda: self.lambda,
            power: self.power,
            eta: self.eta,
            noise: self.noise,
            bandwidth_hz: self.bandwidth_hz,
            overhead_conventional: self.overhead_conventional,
            overhead_skipping: self.overhead_skipping,
            ho_delay_s: self.ho_delay_s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSection {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// `rational` or `exponential`.
    pub tail: String,
}

impl Default for QuadratureSection {
    fn default() -> Self {
        let q = QuadratureSettings::<f64>::default();
        Self {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            max_subdivisions: q.max_subdivisions,
            tail: "rational".into(),
        }
    }
}

impl QuadratureSection {
    fn tail_rule(&self) -> Option<TailRule> {
        match self.tail.as_str() {
            "rational" => Some(TailRule::Rational),
            "exponential" => Some(TailRule::Exponential),
            _ => None,
        }
    }

    pub fn settings(&self) -> QuadratureSettings<f64> {
        QuadratureSettings {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
            tail: self.tail_rule().unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoverageSection {
    pub t_db: Vec<f64>,
    pub states: Vec<String>,
    /// Defaults to `max(2, 15/√λ)` km.
    pub window_radius_km: Option<f64>,
}

impl Default for CoverageSection {
    fn default() -> Self {
        Self {
            t_db: vec![-10.0, -5.0, 0.0, 5.0, 10.0, 15.0],
            states: CoverageState::ALL.iter().map(|s| s.name().to_string()).collect(),
            window_radius_km: None,
        }
    }
}

fn velocity_grid(step: f64, max: f64) -> Vec<f64> {
    let n = (max / step).round() as usize;
    (0..=n).map(|i| i as f64 * step).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThroughputSection {
    pub lambdas: Vec<f64>,
    pub delays_s: Vec<f64>,
    pub velocities_kmh: Vec<f64>,
    pub schemes: Vec<String>,
    /// Upper end of the crossover search.
    pub v_max_kmh: f64,
}

impl Default for ThroughputSection {
    fn default() -> Self {
        Self {
            lambdas: vec![30.0, 50.0, 70.0],
            delays_s: vec![0.7, 2.0],
            velocities_kmh: velocity_grid(10.0, 300.0),
            schemes: HoScheme::ALL.iter().map(|s| s.name().to_string()).collect(),
            v_max_kmh: hoskip::analysis::DEFAULT_MAX_VELOCITY_KMH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HoCostSection {
    pub lambdas: Vec<f64>,
    pub delays_s: Vec<f64>,
    pub velocities_kmh: Vec<f64>,
}

impl Default for HoCostSection {
    fn default() -> Self {
        Self {
            lambdas: vec![30.0],
            delays_s: vec![0.7, 2.0],
            velocities_kmh: velocity_grid(10.0, 300.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateSection {
    /// Thresholds (dB) for the static Monte Carlo checks.
    pub static_t_db: Vec<f64>,
    /// Intensities for the handover-rate law.
    pub ho_lambdas: Vec<f64>,
    pub velocity_kmh: f64,
    pub trajectory_length_km: f64,
    pub trajectories: usize,
    pub mobile_trajectories: usize,
    pub mobile_length_km: f64,
    pub sample_spacing_km: f64,
}

impl Default for ValidateSection {
    fn default() -> Self {
        Self {
            static_t_db: vec![0.0],
            ho_lambdas: vec![10.0, 30.0, 70.0],
            velocity_kmh: 60.0,
            trajectory_length_km: 20.0,
            trajectories: 150,
            mobile_trajectories: 40,
            mobile_length_km: 10.0,
            sample_spacing_km: 0.02,
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub out: Option<PathBuf>,
    pub bits: bool,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str, path: &Path) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::ConfigParse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    /// Defaults, then the file at `path` (if any), then `overrides`; validated.
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::ConfigParse {
                    path: p.to_path_buf(),
                    message: e.to_string(),
                })?;
                Self::from_toml_str(&text, p)?
            }
            None => Self::default(),
        };
        cfg.apply(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(trials) = o.trials {
            self.trials = trials;
        }
        if let Some(out) = &o.out {
            self.out = out.clone();
        }
        self.bits |= o.bits;
    }

    /// Lists every offending field rather than stopping at the first.
    pub fn validate(&self) -> Result<(), CliError> {
        let mut bad = Vec::new();
        if self.trials == 0 {
            bad.push("trials: must be at least 1".to_string());
        }
        if let Err(e) = self.network.params().validate() {
            bad.push(format!("network: {e}"));
        }
        let q = &self.quadrature;
        if q.tail_rule().is_none() {
            bad.push(format!("quadrature.tail: unknown rule `{}`", q.tail));
        }
        if let Err(e) = q.settings().validate() {
            bad.push(format!("quadrature: {e}"));
        }

        let c = &self.coverage;
        if c.t_db.is_empty() {
            bad.push("coverage.t_db: T grid is empty".into());
        }
        if c.t_db.iter().any(|t| !t.is_finite()) {
            bad.push("coverage.t_db: T grid has non-finite entries".into());
        }
        if c.states.is_empty() {
            bad.push("coverage.states: state list is empty".into());
        }
        for s in &c.states {
            if s.parse::<CoverageState>().is_err() {
                bad.push(format!("coverage.states: unknown state `{s}`"));
            }
        }
        if let Some(r) = c.window_radius_km {
            if !(r > 0.0) {
                bad.push("coverage.window_radius_km: must be positive".into());
            }
        }

        let t = &self.throughput;
        check_positive_grid(&mut bad, "throughput.lambdas", "λ list", &t.lambdas, false);
        check_positive_grid(&mut bad, "throughput.delays_s", "d list", &t.delays_s, true);
        check_positive_grid(
            &mut bad,
            "throughput.velocities_kmh",
            "velocity grid",
            &t.velocities_kmh,
            true,
        );
        if t.schemes.is_empty() {
            bad.push("throughput.schemes: scheme list is empty".into());
        }
        for s in &t.schemes {
            if s.parse::<HoScheme>().is_err() {
                bad.push(format!("throughput.schemes: unknown scheme `{s}`"));
            }
        }
        if !(t.v_max_kmh > 0.0) {
            bad.push("throughput.v_max_kmh: must be positive".into());
        }

        let h = &self.hocost;
        check_positive_grid(&mut bad, "hocost.lambdas", "λ list", &h.lambdas, false);
        check_positive_grid(&mut bad, "hocost.delays_s", "d list", &h.delays_s, true);
        check_positive_grid(
            &mut bad,
            "hocost.velocities_kmh",
            "velocity grid",
            &h.velocities_kmh,
            true,
        );

        let v = &self.validate;
        if v.static_t_db.is_empty() {
            bad.push("validate.static_t_db: T grid is empty".into());
        }
        check_positive_grid(&mut bad, "validate.ho_lambdas", "λ list", &v.ho_lambdas, false);
        for (name, x) in [
            ("validate.velocity_kmh", v.velocity_kmh),
            ("validate.trajectory_length_km", v.trajectory_length_km),
            ("validate.mobile_length_km", v.mobile_length_km),
            ("validate.sample_spacing_km", v.sample_spacing_km),
        ] {
            if !(x > 0.0) || !x.is_finite() {
                bad.push(format!("{name}: must be positive"));
            }
        }
        if v.trajectories == 0 || v.mobile_trajectories == 0 {
            bad.push("validate.trajectories: must be at least 1".into());
        }

        if bad.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(bad))
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the effective configuration. The output directory is left
    /// out so the same experiment hashes identically wherever it is written.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.out = PathBuf::new();
        hex::encode(Sha256::digest(canonical.to_toml().as_bytes()))
    }

    pub fn coverage_states(&self) -> Vec<CoverageState> {
        self.coverage.states.iter().filter_map(|s| s.parse().ok()).collect()
    }

    pub fn throughput_schemes(&self) -> Vec<HoScheme> {
        self.throughput.schemes.iter().filter_map(|s| s.parse().ok()).collect()
    }
}

fn check_positive_grid(bad: &mut Vec<String>, field: &str, label: &str, values: &[f64], allow_zero: bool) {
    if values.is_empty() {
        bad.push(format!("{field}: {label} is empty"));
        return;
    }
    let ok = |x: f64| x.is_finite() && if allow_zero { x >= 0.0 } else { x > 0.0 };
    if values.iter().any(|&x| !ok(x)) {
        let bound = if allow_zero { "non-negative" } else { "positive" };
        bad.push(format!("{field}: {label} entries must be {bound}"));
    }
}
