use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::CliError;

/// A table to be written as CSV: header plus pre-formatted rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file_name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file_name: &str, header: &[&str]) -> Self {
        Self {
            file_name: file_name.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join(&self.file_name);
        let csv_err = |e: csv::Error| CliError::Csv {
            path: path.clone(),
            message: e.to_string(),
        };
        let mut w = csv::Writer::from_path(&path).map_err(csv_err)?;
        w.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_err)?;
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}

/// Shortest round-trip representation, so output is byte-stable.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command: &'a str,
    seed: u64,
    trials: u64,
    config_sha256: String,
    package_version: &'static str,
    files: Vec<String>,
}

/// Writes the effective config and a manifest tying outputs to its hash and seed.
pub fn write_manifest(dir: &Path, command: &str, cfg: &ExperimentConfig, files: &[String]) -> Result<(), CliError> {
    let config_path = dir.join("config.toml");
    fs::write(&config_path, cfg.to_toml()).map_err(|e| CliError::io(&config_path, e))?;
    let manifest = Manifest {
        command,
        seed: cfg.seed,
        trials: cfg.trials,
        config_sha256: cfg.hash(),
        package_version: env!("CARGO_PKG_VERSION"),
        files: files.to_vec(),
    };
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))
}
