//! Experiment specs, parameter sweeps and the batch runner.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};

use super::metrics::{summarize_point, MetricsSummary, RunSummary};
use super::HarnessError;
use crate::signal::NoiseSharing;
use crate::sim::config::{ScheduleMode, SensorLayout, SimConfig};
use crate::sim::{self, Outcome};

pub const DEFAULT_RUNS_PER_POINT: usize = 100;

/// A sweep value as written in the spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SweepValue {
    Number(f64),
    Text(String),
}

impl fmt::Display for SweepValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepValue::Number(x) => write!(f, "{x}"),
            SweepValue::Text(s) => f.write_str(s),
        }
    }
}

/// `(param, value)` pairs fixing one sweep point.
pub type Assignments = Vec<(String, SweepValue)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub param: String,
    pub values: Vec<SweepValue>,
}

fn default_runs() -> usize {
    DEFAULT_RUNS_PER_POINT
}

fn yes() -> bool {
    true
}

/// Experiment file layout. The base config is either a path, relative to the
/// spec file, or an inline `[base]` table.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentFile {
    schema_version: u32,
    #[serde(default)]
    name: String,
    #[serde(default)]
    base_config: Option<PathBuf>,
    #[serde(default)]
    base: Option<SimConfig>,
    #[serde(default)]
    sweep: Vec<SweepAxis>,
    #[serde(default = "default_runs")]
    runs_per_point: usize,
    #[serde(default)]
    master_seed: u64,
    #[serde(default)]
    allow_bound_violations: bool,
    #[serde(default = "yes")]
    same_initial_placement: bool,
    #[serde(default)]
    max_ticks: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub base: SimConfig,
    /// Cartesian product of all axes; empty means a single point.
    pub sweep: Vec<SweepAxis>,
    pub runs_per_point: usize,
    pub master_seed: u64,
    /// Run points whose bounds fail instead of skipping them.
    pub allow_bound_violations: bool,
    /// Every run starts from the same placement.
    pub same_initial_placement: bool,
}

impl ExperimentSpec {
    pub fn new(name: impl Into<String>, base: SimConfig) -> ExperimentSpec {
        ExperimentSpec {
            name: name.into(),
            base,
            sweep: Vec::new(),
            runs_per_point: DEFAULT_RUNS_PER_POINT,
            master_seed: 0,
            allow_bound_violations: false,
            same_initial_placement: true,
        }
    }

    pub fn with_axis(mut self, param: &str, values: Vec<SweepValue>) -> Self {
        self.sweep.push(SweepAxis { param: param.to_string(), values });
        self
    }

    pub fn load(path: &Path) -> Result<ExperimentSpec, HarnessError> {
        let text = super::read(path)?;
        let file: ExperimentFile =
            toml::from_str(&text).map_err(|e| HarnessError::Parse { path: path.to_path_buf(), message: e.to_string() })?;
        if file.schema_version != crate::sim::config::SCHEMA_VERSION {
            return Err(HarnessError::Spec(format!("unsupported schema_version {}", file.schema_version)));
        }
        let mut base = match (file.base, file.base_config) {
            (Some(b), None) => b,
            (None, Some(p)) => {
                let full = path.parent().unwrap_or(Path::new(".")).join(p);
                super::parse_config(&full)?
            }
            _ => return Err(HarnessError::Spec("exactly one of `base` and `base_config` is required".into())),
        };
        if let Some(t) = file.max_ticks {
            base.max_ticks = t;
        }
        let spec = ExperimentSpec {
            name: file.name,
            base,
            sweep: file.sweep,
            runs_per_point: file.runs_per_point,
            master_seed: file.master_seed,
            allow_bound_violations: file.allow_bound_violations,
            same_initial_placement: file.same_initial_placement,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the run count and that every swept value applies to the base config.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.runs_per_point == 0 {
            return Err(HarnessError::Spec("runs_per_point must be at least 1".into()));
        }
        for axis in &self.sweep {
            if axis.values.is_empty() {
                return Err(HarnessError::Spec(format!("sweep over `{}` has no values", axis.param)));
            }
            for v in &axis.values {
                apply_param(&mut self.base.clone(), &axis.param, v)?;
            }
        }
        Ok(())
    }

    /// Every sweep point as `(assignments, config)`, first axis varying slowest.
    pub fn points(&self) -> Result<Vec<(Assignments, SimConfig)>, HarnessError> {
        let mut points = vec![(Vec::new(), self.base.clone())];
        for axis in &self.sweep {
            let mut next = Vec::with_capacity(points.len() * axis.values.len());
            for (assign, cfg) in &points {
                for v in &axis.values {
                    let mut cfg = cfg.clone();
                    apply_param(&mut cfg, &axis.param, v)?;
                    let mut a: Assignments = assign.clone();
                    a.push((axis.param.clone(), v.clone()));
                    next.push((a, cfg));
                }
            }
            points = next;
        }
        Ok(points)
    }
}

fn number(param: &str, v: &SweepValue) -> Result<f64, HarnessError> {
    match v {
        SweepValue::Number(x) => Ok(*x),
        SweepValue::Text(s) => Err(HarnessError::Sweep { param: param.into(), reason: format!("expected a number, got `{s}`") }),
    }
}

fn count(param: &str, v: &SweepValue) -> Result<usize, HarnessError> {
    let x = number(param, v)?;
    if x < 0.0 || x.fract() != 0.0 {
        return Err(HarnessError::Sweep { param: param.into(), reason: format!("expected a nonnegative integer, got {x}") });
    }
    Ok(x as usize)
}

fn text<'a>(param: &str, v: &'a SweepValue) -> Result<&'a str, HarnessError> {
    match v {
        SweepValue::Text(s) => Ok(s),
        SweepValue::Number(x) => Err(HarnessError::Sweep { param: param.into(), reason: format!("expected a name, got {x}") }),
    }
}

fn parse_name<T: for<'de> Deserialize<'de>>(param: &str, name: &str) -> Result<T, HarnessError> {
    T::deserialize(serde::de::value::StrDeserializer::<serde::de::value::Error>::new(name))
        .map_err(|e| HarnessError::Sweep { param: param.into(), reason: e.to_string() })
}

/// Sets one swept parameter. Accepts the snake_case config path and the
/// camelCase aliases used in experiment descriptions.
pub fn apply_param(config: &mut SimConfig, param: &str, v: &SweepValue) -> Result<(), HarnessError> {
    match param {
        "noise.level" => config.noise.level = number(param, v)?,
        "noise.sharing" => config.noise.sharing = parse_name::<NoiseSharing>(param, text(param, v)?)?,
        "noise.truncation" => config.noise.truncation = number(param, v)?,
        "noise.static_truncation" => config.noise.static_truncation = number(param, v)?,
        "robots.p" | "robotParams.p" => {
            let offset = match config.robots.sensors {
                SensorLayout::Symmetric { offset, .. } => offset,
                SensorLayout::Explicit { .. } => 0.0,
            };
            config.robots.sensors = SensorLayout::Symmetric { count: count(param, v)?, offset };
        }
        "robots.d_max" | "robotParams.dMax" => config.robots.d_max = number(param, v)?,
        "robots.count" => config.robots.count = count(param, v)?,
        "targets[*].required_robots" | "targets[*].requiredRobots" => {
            let n = count(param, v)?;
            for t in &mut config.targets {
                t.required_robots = n;
            }
        }
        "schedule.mode" => config.schedule.mode = parse_name::<ScheduleMode>(param, text(param, v)?)?,
        "schedule.period" => config.schedule.period = count(param, v)? as u32,
        "max_ticks" => config.max_ticks = count(param, v)? as u64,
        _ => return Err(HarnessError::Sweep { param: param.into(), reason: "unknown parameter".into() }),
    }
    Ok(())
}

/// Seed of run `index` under `master`.
pub fn run_seed(master: u64, index: usize) -> u64 {
    master ^ index as u64
}

/// Runs every point of `spec` on a pool of `workers` threads (0 = all cores).
/// Results do not depend on the worker count.
pub fn run_experiment(spec: &ExperimentSpec, workers: usize) -> Result<MetricsSummary, HarnessError> {
    spec.validate()?;
    let points = spec.points()?;

    let mut prepared = Vec::with_capacity(points.len());
    for (assign, mut cfg) in points {
        if spec.same_initial_placement {
            if let crate::sim::config::Placement::Sampled { seed, .. } = &mut cfg.robots.placement {
                seed.get_or_insert(spec.master_seed);
            }
        }
        cfg.check()?;
        let report = crate::bounds::validate_config(&cfg);
        let valid = report.passed();
        cfg.allow_bound_violations = true;
        prepared.push((assign, cfg, valid));
    }

    let jobs: Vec<(usize, usize)> = prepared
        .iter()
        .enumerate()
        .filter(|(_, p)| p.2 || spec.allow_bound_violations)
        .flat_map(|(pi, _)| (0..spec.runs_per_point).map(move |r| (pi, r)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    let results: Vec<Result<RunSummary, HarnessError>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(pi, r)| {
                let mut cfg = prepared[pi].1.clone();
                cfg.seed = run_seed(spec.master_seed, r);
                let res = sim::run(&cfg, false)?;
                Ok(RunSummary {
                    success: res.outcome == Outcome::AllEncapsulated,
                    ticks: res.ticks,
                    path_length: res.path_length,
                    collisions_static: res.collisions_static,
                    collisions_dynamic: res.collisions_dynamic,
                    stalled_ticks: res.stalled_ticks,
                })
            })
            .collect()
    });

    let mut per_point: Vec<Vec<RunSummary>> = vec![Vec::new(); prepared.len()];
    for (&(pi, _), r) in jobs.iter().zip(results) {
        per_point[pi].push(r?);
    }

    let rows = prepared
        .iter()
        .zip(per_point)
        .map(|((assign, cfg, valid), runs)| summarize_point(assign, cfg, *valid, spec.master_seed, &runs))
        .collect();
    Ok(MetricsSummary { name: spec.name.clone(), master_seed: spec.master_seed, rows })
}
