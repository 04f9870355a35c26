//! Per-point aggregation and metrics files.

use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

use super::experiment::SweepValue;
use super::stats::BoxStats;
use super::HarnessError;
use crate::sim::config::SimConfig;

/// Metrics CSV header, in column order.
pub const CSV_COLUMNS: [&str; 16] = [
    "sweep_param",
    "sweep_value",
    "runs",
    "successes",
    "success_prob",
    "ticks_median",
    "ticks_q1",
    "ticks_q3",
    "ticks_min",
    "ticks_max",
    "path_median",
    "path_q1",
    "path_q3",
    "collisions_static",
    "collisions_dynamic",
    "seed",
];

/// What one run contributes to its point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSummary {
    pub success: bool,
    /// Timeouts count as the tick cap.
    pub ticks: u64,
    pub path_length: f64,
    pub collisions_static: u64,
    pub collisions_dynamic: u64,
    pub stalled_ticks: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointStatus {
    Ok,
    InvalidBounds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    /// Swept parameter names joined with `;` for multi-axis sweeps.
    pub sweep_param: String,
    pub sweep_value: String,
    pub status: PointStatus,
    pub runs: usize,
    pub successes: usize,
    pub success_prob: f64,
    pub ticks: Option<BoxStats>,
    /// In robot diameters.
    pub path: Option<BoxStats>,
    pub collisions_static: u64,
    pub collisions_dynamic: u64,
    pub stalled_ticks: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsSummary {
    pub name: String,
    pub master_seed: u64,
    pub rows: Vec<PointSummary>,
}

pub fn summarize_point(
    assign: &[(String, SweepValue)],
    config: &SimConfig,
    valid: bool,
    seed: u64,
    runs: &[RunSummary],
) -> PointSummary {
    let diameter = 2.0 * config.robots.body_radius;
    let scale = if diameter > 0.0 { diameter } else { 1.0 };
    let ticks: Vec<f64> = runs.iter().map(|r| r.ticks as f64).collect();
    let path: Vec<f64> = runs.iter().map(|r| r.path_length / scale).collect();
    let successes = runs.iter().filter(|r| r.success).count();
    PointSummary {
        sweep_param: assign.iter().map(|a| a.0.as_str()).collect::<Vec<_>>().join(";"),
        sweep_value: assign.iter().map(|a| a.1.to_string()).collect::<Vec<_>>().join(";"),
        status: if valid { PointStatus::Ok } else { PointStatus::InvalidBounds },
        runs: runs.len(),
        successes,
        success_prob: if runs.is_empty() { 0.0 } else { successes as f64 / runs.len() as f64 },
        ticks: BoxStats::from_values(&ticks),
        path: BoxStats::from_values(&path),
        collisions_static: runs.iter().map(|r| r.collisions_static).sum(),
        collisions_dynamic: runs.iter().map(|r| r.collisions_dynamic).sum(),
        stalled_ticks: runs.iter().map(|r| r.stalled_ticks).sum(),
        seed,
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl MetricsSummary {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_COLUMNS)?;
        for r in &self.rows {
            let t = r.ticks;
            let p = r.path;
            w.write_record([
                r.sweep_param.clone(),
                r.sweep_value.clone(),
                r.runs.to_string(),
                r.successes.to_string(),
                r.success_prob.to_string(),
                opt(t.map(|s| s.median)),
                opt(t.map(|s| s.q1)),
                opt(t.map(|s| s.q3)),
                opt(t.map(|s| s.min)),
                opt(t.map(|s| s.max)),
                opt(p.map(|s| s.median)),
                opt(p.map(|s| s.q1)),
                opt(p.map(|s| s.q3)),
                r.collisions_static.to_string(),
                r.collisions_dynamic.to_string(),
                r.seed.to_string(),
            ])?;
        }
        w.flush().map_err(|e| HarnessError::Io { path: None, source: e })?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary is always serializable")
    }

    pub fn from_json_str(text: &str) -> Result<MetricsSummary, HarnessError> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricsFormat {
    Csv,
    Json,
}

pub fn write_metrics(summary: &MetricsSummary, path: &Path, format: MetricsFormat) -> Result<(), HarnessError> {
    let body = match format {
        MetricsFormat::Csv => summary.to_csv_string(),
        MetricsFormat::Json => summary.to_json_string(),
    };
    std::fs::write(path, body).map_err(|e| HarnessError::Io { path: Some(path.to_path_buf()), source: e })
}
