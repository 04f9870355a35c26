//! Declarative run description.
//!
//! Configs are TOML documents with a `schema_version` field. Everything a run
//! depends on lives here; two runs with equal configs are bit-identical.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::controller::{SafeDistances, DEFAULT_DIRECTION_SAMPLES};
use crate::signal::{NoiseModel, SignalField};
use crate::world::{wrap_angle, Environment, SensorRing, Target, Vec2, WorldError};

pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_MAX_TICKS: u64 = 3000;
pub const DEFAULT_EPSILON: f64 = 1e-6;
pub const DEFAULT_PLACEMENT_ATTEMPTS: u64 = 100_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("unsupported schema_version {found}, expected {expected}")]
    SchemaVersion { found: u32, expected: u32 },
    #[error(transparent)]
    World(#[from] WorldError),
    #[error("invalid field `{field}`: {reason}")]
    Field { field: &'static str, reason: String },
}

fn field(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Field { field, reason: reason.into() }
}

/// A target as written in a config. The annulus inner radius comes from
/// `safe_distances.target`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub center: Vec2,
    #[serde(default)]
    pub body_radius: f64,
    pub encap_radius: f64,
    pub required_robots: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "layout", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SensorLayout {
    Symmetric {
        count: usize,
        #[serde(default)]
        offset: f64,
    },
    Explicit { angles: Vec<f64> },
}

impl SensorLayout {
    pub fn count(&self) -> usize {
        match self {
            SensorLayout::Symmetric { count, .. } => *count,
            SensorLayout::Explicit { angles } => angles.len(),
        }
    }

    pub fn ring(&self) -> Result<SensorRing, WorldError> {
        match self {
            SensorLayout::Symmetric { count, offset } => SensorRing::symmetric(*count, *offset),
            SensorLayout::Explicit { angles } => {
                let mut a: Vec<f64> = angles.iter().map(|&x| wrap_angle(x)).collect();
                a.sort_by(f64::total_cmp);
                SensorRing::new(a)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub heading: f64,
}

fn default_attempts() -> u64 {
    DEFAULT_PLACEMENT_ATTEMPTS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Placement {
    /// Rejection sampling. `seed` defaults to the run seed.
    Sampled {
        #[serde(default)]
        seed: Option<u64>,
        #[serde(default = "default_attempts")]
        max_attempts: u64,
    },
    Explicit { poses: Vec<Pose> },
}

impl Default for Placement {
    fn default() -> Self {
        Placement::Sampled { seed: None, max_attempts: DEFAULT_PLACEMENT_ATTEMPTS }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotsConfig {
    pub count: usize,
    pub body_radius: f64,
    pub d_max: f64,
    pub sensors: SensorLayout,
    #[serde(default)]
    pub placement: Placement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleMode {
    /// Every robot acts every `period` ticks starting at tick 0.
    #[default]
    Sync,
    /// Each robot draws its own period from `periods`; all start at tick 0.
    AsyncPeriod,
    /// Every robot acts every `period` ticks from an offset drawn from `offsets`.
    AsyncOffset,
}

fn default_period() -> u32 {
    1
}

fn default_periods() -> Vec<u32> {
    vec![1, 2, 3, 4]
}

fn default_offsets() -> Vec<u32> {
    (0..=5).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    #[serde(default)]
    pub mode: ScheduleMode,
    #[serde(default = "default_period")]
    pub period: u32,
    #[serde(default = "default_periods")]
    pub periods: Vec<u32>,
    #[serde(default = "default_offsets")]
    pub offsets: Vec<u32>,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig {
            mode: ScheduleMode::Sync,
            period: 1,
            periods: default_periods(),
            offsets: default_offsets(),
        }
    }
}

fn default_max_ticks() -> u64 {
    DEFAULT_MAX_TICKS
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

fn default_direction_samples() -> usize {
    DEFAULT_DIRECTION_SAMPLES
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub schema_version: u32,
    pub environment: Environment,
    #[serde(default)]
    pub targets: Vec<TargetSpec>,
    pub robots: RobotsConfig,
    pub kernels: SignalField,
    pub safe_distances: SafeDistances,
    #[serde(default)]
    pub noise: NoiseModel,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(default = "default_max_ticks")]
    pub max_ticks: u64,
    #[serde(default)]
    pub seed: u64,
    /// Extra target separation margin.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_direction_samples")]
    pub direction_samples: usize,
    /// Run even when the bounds report has failures.
    #[serde(default)]
    pub allow_bound_violations: bool,
}

impl SimConfig {
    pub fn from_toml_str(text: &str) -> Result<SimConfig, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config is always serializable")
    }

    pub fn sensor_count(&self) -> usize {
        self.robots.sensors.count()
    }

    pub fn placement_seed(&self) -> u64 {
        match self.robots.placement {
            Placement::Sampled { seed: Some(s), .. } => s,
            _ => self.seed,
        }
    }

    /// Fixes the placement seed so later changes to `seed` keep the same start.
    pub fn pin_placement(&mut self) {
        let s = self.placement_seed();
        if let Placement::Sampled { seed, .. } = &mut self.robots.placement {
            *seed = Some(s);
        }
    }

    /// Targets with annuli as configured (before any noise adjustment).
    pub fn world_targets(&self) -> Vec<Target> {
        self.targets
            .iter()
            .map(|t| Target {
                center: t.center,
                body_radius: t.body_radius,
                safe_radius: self.safe_distances.target,
                encap_radius: t.encap_radius,
                required_robots: t.required_robots,
                encapsulated: false,
            })
            .collect()
    }

    /// Structural checks: shapes, signs and ranges. Guarantee conditions live in `bounds`.
    pub fn check(&self) -> Result<(), ConfigError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::SchemaVersion { found: self.schema_version, expected: SCHEMA_VERSION });
        }
        self.environment.validate()?;
        for (i, t) in self.world_targets().iter().enumerate() {
            t.validate(i)?;
            if !self.environment.contains(t.center) {
                return Err(field("targets", format!("target {i} center lies outside the environment")));
            }
        }
        let r = &self.robots;
        if !(r.body_radius.is_finite() && r.body_radius >= 0.0) {
            return Err(field("robots.body_radius", "must be finite and nonnegative"));
        }
        if !(r.d_max.is_finite() && r.d_max > 0.0) {
            return Err(field("robots.d_max", "must be finite and positive"));
        }
        r.sensors.ring()?;
        if let Placement::Explicit { poses } = &r.placement {
            if poses.len() != r.count {
                return Err(field(
                    "robots.placement.poses",
                    format!("{} poses given for {} robots", poses.len(), r.count),
                ));
            }
        }
        for (name, k) in [
            ("kernels.target", &self.kernels.target),
            ("kernels.robot", &self.kernels.robot),
            ("kernels.boundary", &self.kernels.boundary),
        ] {
            if !k.is_valid() {
                return Err(field(name, "peak and influence must be finite and positive"));
            }
        }
        let s = &self.safe_distances;
        if ![s.target, s.robot, s.boundary].iter().all(|v| v.is_finite() && *v > 0.0) {
            return Err(field("safe_distances", "all safe distances must be finite and positive"));
        }
        let n = &self.noise;
        if !(n.level.is_finite() && n.level >= 0.0) {
            return Err(field("noise.level", "must be finite and nonnegative"));
        }
        if !(n.truncation > 0.0 && n.truncation <= 1.0) {
            return Err(field("noise.truncation", "must lie in (0, 1]"));
        }
        if !(n.static_truncation > 0.0 && n.static_truncation <= 1.0) {
            return Err(field("noise.static_truncation", "must lie in (0, 1]"));
        }
        if n.adjust_thresholds && n.static_truncation >= 1.0 {
            return Err(field("noise.adjust_thresholds", "requires static_truncation below 1"));
        }
        let sch = &self.schedule;
        if sch.period == 0 || sch.periods.is_empty() || sch.periods.contains(&0) {
            return Err(field("schedule", "periods must be positive and non-empty"));
        }
        if sch.offsets.is_empty() {
            return Err(field("schedule.offsets", "must be non-empty"));
        }
        if self.direction_samples < 8 {
            return Err(field("direction_samples", "must be at least 8"));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(field("epsilon", "must be finite and positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
schema_version = 1

[environment.boundary]
shape = "polygon"
vertices = [{ x = 0.0, y = 0.0 }, { x = 20.0, y = 0.0 }, { x = 20.0, y = 20.0 }, { x = 0.0, y = 20.0 }]

[[targets]]
center = { x = 10.0, y = 10.0 }
body_radius = 0.5
encap_radius = 3.2
required_robots = 5

[robots]
count = 10
body_radius = 0.5
d_max = 0.2
sensors = { layout = "symmetric", count = 8 }

[kernels]
target = { kind = "linear", peak = 1.0, influence = 12.0 }
robot = { kind = "linear", peak = 1.0, influence = 2.33 }
boundary = { kind = "linear", peak = 1.0, influence = 2.0 }

[safe_distances]
target = 2.5
robot = 2.0
boundary = 1.0
"#;

    #[test]
    fn parses_with_defaults() {
        let c = SimConfig::from_toml_str(MINIMAL).unwrap();
        c.check().unwrap();
        assert_eq!(c.max_ticks, 3000);
        assert_eq!(c.epsilon, 1e-6);
        assert_eq!(c.direction_samples, 32);
        assert_eq!(c.schedule, ScheduleConfig::default());
        assert_eq!(c.robots.placement, Placement::default());
        assert_eq!(c.sensor_count(), 8);
        let back = SimConfig::from_toml_str(&c.to_toml_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn missing_influence_names_the_field() {
        let text = MINIMAL.replace(
            "robot = { kind = \"linear\", peak = 1.0, influence = 2.33 }",
            "robot = { kind = \"linear\", peak = 1.0 }",
        );
        let err = SimConfig::from_toml_str(&text).unwrap_err().to_string();
        assert!(err.contains("influence"), "{err}");
    }

    #[test]
    fn wrong_schema_version() {
        let text = MINIMAL.replace("schema_version = 1", "schema_version = 9");
        let c = SimConfig::from_toml_str(&text).unwrap();
        assert!(matches!(c.check(), Err(ConfigError::SchemaVersion { found: 9, .. })));
    }

    #[test]
    fn pinning_keeps_placement_seed() {
        let mut c = SimConfig::from_toml_str(MINIMAL).unwrap();
        c.seed = 17;
        c.pin_placement();
        c.seed = 99;
        assert_eq!(c.placement_seed(), 17);
    }
}
