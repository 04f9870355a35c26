//! Config loading, batch experiments, metrics and rendering.

pub mod experiment;
pub mod metrics;
pub mod render;
pub mod stats;

use std::path::{Path, PathBuf};
use thiserror::Error;

use crate::bounds::{validate_config, BoundsReport};
use crate::sim::config::{ConfigError, SimConfig};
use crate::sim::SimError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{}: {source}", path.as_ref().map_or("<output>".to_string(), |p| p.display().to_string()))]
    Io { path: Option<PathBuf>, source: std::io::Error },
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("invalid experiment: {0}")]
    Spec(String),
    #[error("cannot sweep `{param}`: {reason}")]
    Sweep { param: String, reason: String },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::Io { path: Some(path.to_path_buf()), source: e })
}

/// Parses and structurally checks a config file without evaluating bounds.
pub fn parse_config(path: &Path) -> Result<SimConfig, HarnessError> {
    let text = read(path)?;
    let config = SimConfig::from_toml_str(&text)
        .map_err(|e| HarnessError::Parse { path: path.to_path_buf(), message: e.to_string() })?;
    config.check()?;
    Ok(config)
}

/// A parsed config with its bounds report.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: SimConfig,
    pub report: BoundsReport,
}

impl LoadedConfig {
    /// The config may run: bounds pass or violations are allowed.
    pub fn runnable(&self) -> bool {
        self.report.passed() || self.config.allow_bound_violations
    }
}

/// Parses, checks and evaluates the guarantee bounds of a config file.
pub fn load_config(path: &Path) -> Result<LoadedConfig, HarnessError> {
    let config = parse_config(path)?;
    let report = validate_config(&config);
    Ok(LoadedConfig { config, report })
}

/// Writes one JSON object per tick.
pub fn write_trace(trace: &[crate::sim::TickRecord], path: &Path) -> Result<(), HarnessError> {
    let mut out = String::new();
    for rec in trace {
        out.push_str(&serde_json::to_string(rec)?);
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| HarnessError::Io { path: Some(path.to_path_buf()), source: e })
}
