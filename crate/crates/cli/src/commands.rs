use hoskip::analysis::{average_throughput_from, coverage, crossover_velocity_from, ho_cost, spectral_efficiencies};
use hoskip::simulation::simulate_static_coverage_grid;
use hoskip::{db_to_linear, HoScheme};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::{num, Table};

/// Analytical and Monte Carlo coverage on the configured T × state grid.
pub fn coverage_table(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let params = cfg.network.params();
    let quad = cfg.quadrature.settings();
    let states = cfg.coverage_states();
    let thresholds: Vec<f64> = cfg.coverage.t_db.iter().map(|&db| db_to_linear(db)).collect();
    let grid = simulate_static_coverage_grid(
        &states,
        &thresholds,
        &params,
        cfg.trials,
        cfg.seed,
        cfg.coverage.window_radius_km,
    )?;

    let mut table = Table::new(
        "coverage.csv",
        &[
            "T_dB",
            "scheme_state",
            "analytical",
            "simulated",
            "ci_halfwidth",
            "trials",
        ],
    );
    for (ti, (&db, &t)) in cfg.coverage.t_db.iter().zip(&thresholds).enumerate() {
        for (si, &state) in states.iter().enumerate() {
            let analytical = coverage(state, t, &params, &quad)?;
            let est = grid.estimates[si][ti];
            table.push(vec![
                num(db),
                state.name().into(),
                num(analytical),
                num(est.probability),
                num(est.ci_halfwidth),
                est.trials.to_string(),
            ]);
        }
    }
    Ok(table)
}

/// Throughput over λ × d × v × scheme, plus the crossover of each skipping
/// scheme against conventional handover.
pub fn throughput_tables(cfg: &ExperimentConfig) -> Result<(Table, Table), CliError> {
    let base = cfg.network.params();
    let quad = cfg.quadrature.settings();
    let schemes = cfg.throughput_schemes();
    let tp = &cfg.throughput;

    // Efficiencies depend on λ only through noise; compute once per λ.
    let effs = tp
        .lambdas
        .par_iter()
        .map(|&lambda| spectral_efficiencies(&base.with_lambda(lambda), &quad))
        .collect::<Result<Vec<_>, _>>()?;

    let mut header = vec![
        "lambda",
        "d_s",
        "velocity_kmh",
        "scheme",
        "throughput",
        "saturated_flag",
    ];
    if cfg.bits {
        header.push("throughput_mbps");
    }
    let mut table = Table::new("throughput.csv", &header);
    let mut crossings = Table::new(
        "crossover.csv",
        &["lambda", "d_s", "baseline", "scheme", "crossover_kmh"],
    );

    for (&lambda, eff) in tp.lambdas.iter().zip(&effs) {
        for &d in &tp.delays_s {
            let params = base.with_lambda(lambda).with_ho_delay(d);
            for &v in &tp.velocities_kmh {
                for &scheme in &schemes {
                    let t = average_throughput_from(eff, &params, scheme, v)?;
                    let mut row = vec![
                        num(lambda),
                        num(d),
                        num(v),
                        scheme.name().into(),
                        num(t.nats_per_s / 1e6),
                        u8::from(t.saturated()).to_string(),
                    ];
                    if cfg.bits {
                        row.push(num(t.bits_per_s() / 1e6));
                    }
                    table.push(row);
                }
            }
            for &scheme in schemes.iter().filter(|s| s.skips()) {
                let v = crossover_velocity_from(eff, &params, HoScheme::Conventional, scheme, tp.v_max_kmh)?;
                crossings.push(vec![
                    num(lambda),
                    num(d),
                    HoScheme::Conventional.name().into(),
                    scheme.name().into(),
                    v.map(num).unwrap_or_default(),
                ]);
            }
        }
    }
    Ok((table, crossings))
}

/// Handover cost fraction over v × λ × d for every scheme.
pub fn hocost_table(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let h = &cfg.hocost;
    let mut table = Table::new("hocost.csv", &["velocity", "lambda", "d_s", "scheme", "d_ho_fraction"]);
    for &v in &h.velocities_kmh {
        for &lambda in &h.lambdas {
            for &d in &h.delays_s {
                for scheme in HoScheme::ALL {
                    let cost = ho_cost(scheme, v, lambda, d)?;
                    table.push(vec![
                        num(v),
                        num(lambda),
                        num(d),
                        scheme.name().into(),
                        num(cost.fraction),
                    ]);
                }
            }
        }
    }
    Ok(table)
}
