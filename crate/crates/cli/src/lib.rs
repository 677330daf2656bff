//! Command-line front end for the handover-skipping model: configuration,
//! experiment runners and output files.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod validate;

use std::path::Path;

pub use config::{ExperimentConfig, Overrides};
pub use error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Coverage,
    Throughput,
    HoCost,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Coverage => "coverage",
            Command::Throughput => "throughput",
            Command::HoCost => "hocost",
            Command::Validate => "validate",
        }
    }
}

/// Outcome of a successful run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub files: Vec<String>,
    /// `false` only when a validation check failed.
    pub passed: bool,
    pub messages: Vec<String>,
}

/// Runs `command` and writes its outputs and manifest under `cfg.out`.
pub fn run(command: Command, cfg: &ExperimentConfig) -> Result<RunSummary, CliError> {
    let dir: &Path = &cfg.out;
    output::ensure_dir(dir)?;
    let mut files = Vec::new();
    let mut messages = Vec::new();
    let mut passed = true;

    match command {
        Command::Coverage => {
            let t = commands::coverage_table(cfg)?;
            t.write(dir)?;
            files.push(t.file_name);
        }
        Command::Throughput => {
            let (t, c) = commands::throughput_tables(cfg)?;
            for table in [t, c] {
                table.write(dir)?;
                files.push(table.file_name);
            }
        }
        Command::HoCost => {
            let t = commands::hocost_table(cfg)?;
            t.write(dir)?;
            files.push(t.file_name);
        }
        Command::Validate => {
            let report = validate::run(cfg)?;
            let path = dir.join("validate.json");
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            std::fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;
            files.push("validate.json".into());
            for c in &report.checks {
                messages.push(format!(
                    "{:<13} {:<40} measured {:.3e} tolerance {:.3e}",
                    format!("{:?}", c.verdict).to_uppercase(),
                    c.name,
                    c.measured,
                    c.tolerance
                ));
            }
            passed = report.passed;
        }
    }
    output::write_manifest(dir, command.name(), cfg, &files)?;
    Ok(RunSummary {
        files,
        passed,
        messages,
    })
}
