//! The per-robot reactive policy.
//!
//! One call maps one set of readings to one turn-then-move command. There is
//! no memory: the only state carried between calls is the robot's RNG stream,
//! which is consumed solely by the random-walk branch.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};
use thiserror::Error;

use crate::perception::{
    bearing_arc, strongest_sensor, virtual_source_distance, weakest_sensor, AngularInterval,
};
use crate::signal::{SensorReadings, SignalField};
use crate::world::{angle_distance, wrap_angle, ControlCommand, SensorRing};

/// Steps shorter than this are treated as standing still.
pub const MIN_STEP: f64 = 1e-9;

/// Value ties closer than this fall through to the midpoint rule when sampling an arc.
const ARGMAX_TIE: f64 = 1e-12;

pub const DEFAULT_DIRECTION_SAMPLES: usize = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ControlError {
    #[error("not sensing any target")]
    NotSensingTarget,
}

/// Center-to-source distances a robot must keep, per source type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SafeDistances {
    pub target: f64,
    pub robot: f64,
    pub boundary: f64,
}

/// Intensity thresholds that trigger avoidance, per source type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub target: f64,
    pub robot: f64,
    pub boundary: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControllerParams {
    pub d_max: f64,
    pub body_radius: f64,
    pub safe: SafeDistances,
    pub thresholds: Thresholds,
    pub direction_samples: usize,
    pub field: SignalField,
}

/// Static source that triggered avoidance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StaticSource {
    Target,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Behavior {
    Avoid(StaticSource),
    Attract,
    Explore,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub command: ControlCommand,
    pub behavior: Behavior,
    /// The primary direction was blocked and the robot fell back to its least-crowded sensor.
    pub fallback: bool,
}

fn snap(d: f64) -> f64 {
    if d < MIN_STEP {
        0.0
    } else {
        d
    }
}

/// Directions that cannot bring the robot closer to a static source seen
/// strongest by sensor `k`: the bearing arc rotated half a turn and shrunk by
/// a quarter turn on each side.
pub fn avoidance_arc(k: usize, sensors: &SensorRing) -> AngularInterval {
    let right = 0.5 * sensors.gap_after(k);
    let left = 0.5 * sensors.gap_before(k);
    let phi = sensors.angle(k);
    AngularInterval::new(phi + right + FRAC_PI_2, phi - left + 3.0 * FRAC_PI_2)
}

/// Directions that cannot increase the distance to a target seen strongest by sensor `k`.
pub fn attraction_arc(k: usize, sensors: &SensorRing) -> AngularInterval {
    let right = 0.5 * sensors.gap_after(k);
    let left = 0.5 * sensors.gap_before(k);
    let phi = sensors.angle(k);
    AngularInterval::new(phi + right + 3.0 * FRAC_PI_2, phi - left + FRAC_PI_2)
}

/// Longest admissible step toward the strongest target sensor's virtual
/// source along body-frame direction `theta`, using the worst-case bearing
/// inside that sensor's arc.
pub fn dist_attract_target(
    target_readings: &[f64],
    theta: f64,
    sensors: &SensorRing,
    params: &ControllerParams,
) -> Result<f64, ControlError> {
    let k = strongest_sensor(target_readings).ok_or(ControlError::NotSensingTarget)?;
    let sensor_distance = params
        .field
        .target
        .inverse(target_readings[k])
        .ok_or(ControlError::NotSensingTarget)?;
    let d_g = virtual_source_distance(sensor_distance, params.body_radius, sensors.max_half_gap_at(k));
    let worst = bearing_arc(k, sensors).farthest_from(theta);
    let d = (2.0 * d_g * worst.cos()).min(params.d_max).max(0.0);
    Ok(snap(d))
}

/// The two sensors bracketing `theta`; a single sensor when `theta` hits one exactly.
fn flanking_sensors(theta: f64, sensors: &SensorRing) -> (usize, usize) {
    let p = sensors.len();
    for k in 0..p {
        let off = wrap_angle(theta - sensors.angle(k));
        if off < 1e-12 || TAU - off < 1e-12 {
            return (k, k);
        }
        if off < sensors.gap_after(k) {
            return (k, (k + 1) % p);
        }
    }
    // unreachable for a valid ring; fall back to the nearest sensor
    let k = (0..p)
        .min_by(|&a, &b| {
            angle_distance(theta, sensors.angle(a)).total_cmp(&angle_distance(theta, sensors.angle(b)))
        })
        .unwrap_or(0);
    (k, k)
}

/// Longest step along `theta` that keeps the robot at least
/// `r_r^safe + d_max` from the nearest virtual robot source seen by the two
/// sensors flanking `theta`, so that a neighbor moving `d_max` toward it still
/// stays `r_r^safe` away.
pub fn dist_avo_dyn_obs(
    robot_readings: &[f64],
    theta: f64,
    sensors: &SensorRing,
    params: &ControllerParams,
) -> f64 {
    let (a, b) = flanking_sensors(theta, sensors);
    let dist = |k: usize| params.field.robot.inverse(robot_readings[k]).unwrap_or(f64::INFINITY);
    let (l, d_l) = {
        let (da, db) = (dist(a), dist(b));
        if db < da {
            (b, db)
        } else {
            (a, da)
        }
    };
    if d_l.is_infinite() {
        return params.d_max;
    }
    let r = params.body_radius;
    let psi = sensors.angle(l) - theta;
    let margin = d_l - params.safe.robot - params.d_max;
    let lateral = r * psi.sin();
    if margin < lateral.abs() {
        return 0.0;
    }
    let bound = r * psi.cos() + (margin * margin - lateral * lateral).sqrt();
    if bound < 0.0 {
        return 0.0;
    }
    snap(bound.min(params.d_max))
}

/// Samples `arc` and returns the direction with the largest free distance.
/// Equal values prefer the sample nearest the arc midpoint.
fn best_direction(arc: &AngularInterval, robot_readings: &[f64], sensors: &SensorRing, params: &ControllerParams) -> (f64, f64) {
    let mid = arc.midpoint();
    let mut best: Option<(f64, f64, f64)> = None;
    for theta in arc.samples(params.direction_samples.max(2)) {
        let d = dist_avo_dyn_obs(robot_readings, theta, sensors, params);
        let off = angle_distance(theta, mid);
        let better = match best {
            None => true,
            Some((_, bd, boff)) => d > bd + ARGMAX_TIE || ((d - bd).abs() <= ARGMAX_TIE && off < boff),
        };
        if better {
            best = Some((theta, d, off));
        }
    }
    let (theta, d, _) = best.expect("at least two samples");
    (theta, d)
}

/// Step toward the least-crowded sensor.
fn fallback(robot_readings: &[f64], sensors: &SensorRing, params: &ControllerParams) -> ControlCommand {
    let k = weakest_sensor(robot_readings);
    let theta = sensors.angle(k);
    ControlCommand { turn: theta, distance: dist_avo_dyn_obs(robot_readings, theta, sensors, params) }
}

fn max_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(0.0, f64::max)
}

/// Full decision, including which behavior produced the command.
pub fn decide<R: Rng + ?Sized>(
    readings: &SensorReadings,
    sensors: &SensorRing,
    params: &ControllerParams,
    rng: &mut R,
) -> Decision {
    let zr = &readings.robot;
    let max_g = max_of(&readings.target);
    let max_e = max_of(&readings.boundary);
    let hot_g = max_g >= params.thresholds.target;
    let hot_e = max_e >= params.thresholds.boundary;

    if hot_g || hot_e {
        let source = if hot_g && hot_e {
            if max_e / params.thresholds.boundary > max_g / params.thresholds.target {
                StaticSource::Boundary
            } else {
                StaticSource::Target
            }
        } else if hot_g {
            StaticSource::Target
        } else {
            StaticSource::Boundary
        };
        let z = match source {
            StaticSource::Target => &readings.target,
            StaticSource::Boundary => &readings.boundary,
        };
        let k = strongest_sensor(z).expect("a reading above a positive threshold exists");
        let (theta, d) = best_direction(&avoidance_arc(k, sensors), zr, sensors, params);
        return Decision {
            command: ControlCommand { turn: theta, distance: d },
            behavior: Behavior::Avoid(source),
            fallback: false,
        };
    }

    if max_g > 0.0 {
        let k = strongest_sensor(&readings.target).expect("positive target reading");
        let (theta, d_free) = best_direction(&attraction_arc(k, sensors), zr, sensors, params);
        let d_att = dist_attract_target(&readings.target, theta, sensors, params).unwrap_or(0.0);
        let d = d_free.min(d_att);
        if d > 0.0 {
            return Decision {
                command: ControlCommand { turn: theta, distance: d },
                behavior: Behavior::Attract,
                fallback: false,
            };
        }
        return Decision { command: fallback(zr, sensors, params), behavior: Behavior::Attract, fallback: true };
    }

    let theta = rng.random_range(0.0..TAU);
    let d = dist_avo_dyn_obs(zr, theta, sensors, params);
    if d > 0.0 {
        return Decision {
            command: ControlCommand { turn: theta, distance: d },
            behavior: Behavior::Explore,
            fallback: false,
        };
    }
    Decision { command: fallback(zr, sensors, params), behavior: Behavior::Explore, fallback: true }
}

/// One control update. The returned distance always lies in `[0, d_max]`.
pub fn control_step<R: Rng + ?Sized>(
    readings: &SensorReadings,
    sensors: &SensorRing,
    params: &ControllerParams,
    rng: &mut R,
) -> ControlCommand {
    decide(readings, sensors, params, rng).command
}
