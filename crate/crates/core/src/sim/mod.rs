//! Discrete-time engine: sense against one snapshot, decide, move everyone at once.

pub mod config;
pub mod placement;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{validate_with_placement, BoundsReport};
use crate::controller::{decide, Behavior, ControllerParams, SafeDistances};
use crate::signal::{NoiseSharing, SignalField};
use crate::world::{apply_command, ControlCommand, RobotState, Schedule, World};

use config::{ConfigError, ScheduleMode, SimConfig};
use placement::{place_robots, PlacementError};

/// Stream id of the per-swarm noise generator.
pub const SWARM_NOISE_STREAM: u64 = u64::MAX;

pub fn control_stream(robot: u64) -> u64 {
    robot * 2
}

pub fn noise_stream(robot: u64) -> u64 {
    robot * 2 + 1
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Placement(#[from] PlacementError),
    #[error("configuration violates guarantee bounds: {}", .0.failures().map(|c| c.id.as_str()).collect::<Vec<_>>().join(", "))]
    Bounds(Box<BoundsReport>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Entity {
    Robot(usize),
    Target(usize),
    Boundary,
}

/// Two entities closer than the applicable safe distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub a: Entity,
    pub b: Entity,
    pub distance: f64,
}

impl Violation {
    pub fn is_dynamic(&self) -> bool {
        matches!((self.a, self.b), (Entity::Robot(_), Entity::Robot(_)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotRecord {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    pub frozen: bool,
    /// Present on ticks the robot was due.
    pub command: Option<ControlCommand>,
    pub behavior: Option<Behavior>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetRecord {
    pub annulus_count: usize,
    pub emitting: bool,
}

/// State after one tick. Serialized one per line; fields appear in declaration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TickRecord {
    pub tick: u64,
    pub robots: Vec<RobotRecord>,
    pub targets: Vec<TargetRecord>,
    pub violations: Vec<Violation>,
    pub path_length: f64,
    /// Robots that were due this tick.
    pub due: usize,
    /// Some due robot moved a positive distance.
    pub moved: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    AllEncapsulated,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub outcome: Outcome,
    pub ticks: u64,
    pub path_length: f64,
    pub collisions_static: u64,
    pub collisions_dynamic: u64,
    /// Ticks before completion on which no due robot moved.
    pub stalled_ticks: u64,
    /// Ticks before completion with unfrozen robots but none due.
    pub idle_ticks: u64,
    pub bounds_passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<Vec<TickRecord>>,
}

pub struct Simulation {
    world: World,
    params: ControllerParams,
    noise: crate::signal::NoiseModel,
    safe: SafeDistances,
    control: Vec<ChaCha8Rng>,
    noise_rngs: Vec<ChaCha8Rng>,
    swarm: ChaCha8Rng,
    tick: u64,
    path_length: f64,
    report: BoundsReport,
}

impl Simulation {
    /// Builds the world for `config`. Fails when the bounds report has
    /// failures unless the config allows bound violations.
    pub fn new(config: &SimConfig) -> Result<Simulation, SimError> {
        let streams: Vec<u64> = (0..config.robots.count as u64).collect();
        Self::with_streams(config, &streams)
    }

    /// As [`Simulation::new`], with robot `i` drawing from RNG slot `streams[i]`.
    pub fn with_streams(config: &SimConfig, streams: &[u64]) -> Result<Simulation, SimError> {
        config.check()?;
        assert_eq!(streams.len(), config.robots.count, "one stream slot per robot");
        let poses = place_robots(config)?;
        let report = validate_with_placement(config, Ok(poses.iter().map(|p| p.0).collect()));
        if !report.passed() && !config.allow_bound_violations {
            return Err(SimError::Bounds(Box::new(report)));
        }
        let sensors = config.robots.sensors.ring().map_err(ConfigError::from)?;
        let mut control: Vec<ChaCha8Rng> = streams.iter().map(|&s| stream_rng(config.seed, control_stream(s))).collect();
        let noise_rngs = streams.iter().map(|&s| stream_rng(config.seed, noise_stream(s))).collect();
        let sch = &config.schedule;
        let robots = poses
            .iter()
            .zip(control.iter_mut())
            .map(|(&(center, heading), rng)| {
                let schedule = match sch.mode {
                    ScheduleMode::Sync => Schedule { period: sch.period, start_offset: 0 },
                    ScheduleMode::AsyncPeriod => {
                        Schedule { period: sch.periods[rng.random_range(0..sch.periods.len())], start_offset: 0 }
                    }
                    ScheduleMode::AsyncOffset => {
                        Schedule { period: sch.period, start_offset: sch.offsets[rng.random_range(0..sch.offsets.len())] }
                    }
                };
                RobotState {
                    center,
                    heading,
                    body_radius: config.robots.body_radius,
                    sensors: sensors.clone(),
                    frozen: false,
                    schedule,
                }
            })
            .collect();
        let world = World { environment: config.environment.clone(), targets: report.run_targets(config), robots };
        let params = ControllerParams {
            d_max: config.robots.d_max,
            body_radius: config.robots.body_radius,
            safe: config.safe_distances,
            thresholds: report.controller_thresholds(),
            direction_samples: config.direction_samples,
            field: config.kernels,
        };
        Ok(Simulation {
            world,
            params,
            noise: config.noise,
            safe: config.safe_distances,
            control,
            noise_rngs,
            swarm: stream_rng(config.seed, SWARM_NOISE_STREAM),
            tick: 0,
            path_length: 0.0,
            report,
        })
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    pub fn report(&self) -> &BoundsReport {
        &self.report
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn field(&self) -> &SignalField {
        &self.params.field
    }

    /// Advances one tick.
    pub fn step(&mut self) -> TickRecord {
        let t = self.tick;
        let due: Vec<usize> = (0..self.world.robots.len())
            .filter(|&i| {
                let r = &self.world.robots[i];
                !r.frozen && r.schedule.is_due(t)
            })
            .collect();
        let swarm_draw = (self.noise.sharing == NoiseSharing::PerSwarm && !self.noise.is_noiseless())
            .then(|| self.noise.draw_triplet(&mut self.swarm));

        let decisions: Vec<_> = due
            .iter()
            .map(|&i| {
                let readings = self.params.field.sense(&self.world, i, &self.noise, &mut self.noise_rngs[i], swarm_draw);
                decide(&readings, &self.world.robots[i].sensors, &self.params, &mut self.control[i])
            })
            .collect();

        let mut commands: Vec<Option<(ControlCommand, Behavior)>> = vec![None; self.world.robots.len()];
        let mut moved = false;
        for (&i, d) in due.iter().zip(&decisions) {
            self.world.robots[i] = apply_command(&self.world.robots[i], d.command);
            self.path_length += d.command.distance;
            moved |= d.command.distance > 0.0;
            commands[i] = Some((d.command, d.behavior));
        }

        self.world.check_encapsulation();
        let violations = self.monitor();
        self.tick += 1;

        TickRecord {
            tick: t,
            robots: self
                .world
                .robots
                .iter()
                .zip(commands)
                .map(|(r, c)| RobotRecord {
                    x: r.center.x,
                    y: r.center.y,
                    heading: r.heading,
                    frozen: r.frozen,
                    command: c.map(|c| c.0),
                    behavior: c.map(|c| c.1),
                })
                .collect(),
            targets: self
                .world
                .targets
                .iter()
                .map(|g| TargetRecord { annulus_count: self.world.annulus_count(g), emitting: g.emitting() })
                .collect(),
            violations,
            path_length: self.path_length,
            due: due.len(),
            moved,
        }
    }

    /// Pairs closer than their safe distance. Encapsulated targets no longer count as sources.
    fn monitor(&self) -> Vec<Violation> {
        let robots = &self.world.robots;
        let mut out = Vec::new();
        for i in 0..robots.len() {
            for j in i + 1..robots.len() {
                let d = robots[i].center.distance(robots[j].center);
                if d < self.safe.robot {
                    out.push(Violation { a: Entity::Robot(i), b: Entity::Robot(j), distance: d });
                }
            }
            for (g, target) in self.world.targets.iter().enumerate() {
                let d = robots[i].center.distance(target.center);
                if target.emitting() && d < self.safe.target {
                    out.push(Violation { a: Entity::Robot(i), b: Entity::Target(g), distance: d });
                }
            }
            let d = self.world.environment.signed_distance(robots[i].center);
            if d < self.safe.boundary {
                out.push(Violation { a: Entity::Robot(i), b: Entity::Boundary, distance: d });
            }
        }
        out
    }

    fn done(&self) -> bool {
        !self.world.targets.is_empty() && self.world.all_encapsulated()
    }

    /// Steps until every target is encapsulated or `max_ticks` ticks have run.
    pub fn run(mut self, max_ticks: u64, keep_trace: bool) -> RunResult {
        let mut trace = keep_trace.then(Vec::new);
        let (mut stat, mut dynamic, mut stalled, mut idle) = (0, 0, 0, 0);
        while self.tick < max_ticks && !self.done() {
            let rec = self.step();
            for v in &rec.violations {
                if v.is_dynamic() {
                    dynamic += 1;
                } else {
                    stat += 1;
                }
            }
            if rec.due > 0 && !rec.moved {
                stalled += 1;
            }
            if rec.due == 0 {
                idle += 1;
            }
            if let Some(tr) = trace.as_mut() {
                tr.push(rec);
            }
        }
        RunResult {
            outcome: if self.done() { Outcome::AllEncapsulated } else { Outcome::Timeout },
            ticks: self.tick,
            path_length: self.path_length,
            collisions_static: stat,
            collisions_dynamic: dynamic,
            stalled_ticks: stalled,
            idle_ticks: idle,
            bounds_passed: self.report.passed(),
            trace,
        }
    }
}

/// Initial world for `config`.
pub fn initialize(config: &SimConfig) -> Result<World, SimError> {
    Ok(Simulation::new(config)?.world)
}

/// One full run. A deterministic function of the config.
pub fn run(config: &SimConfig, keep_trace: bool) -> Result<RunResult, SimError> {
    Ok(Simulation::new(config)?.run(config.max_ticks, keep_trace))
}
