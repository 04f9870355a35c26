//! Geometric ground truth: the arena, targets, robots and their kinematics.
//!
//! Everything in here is "what is really there". Robots never read these
//! values directly; they only see intensities produced by [`crate::signal`].

use std::f64::consts::TAU;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WorldError {
    #[error("point ({x}, {y}) lies outside the environment boundary")]
    Containment { x: f64, y: f64 },
    #[error("invalid environment: {0}")]
    InvalidEnvironment(String),
    #[error("invalid sensor layout: {0}")]
    InvalidSensors(String),
    #[error("invalid target {index}: {reason}")]
    InvalidTarget { index: usize, reason: String },
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Smallest absolute difference between two angles, in `[0, π]`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(TAU - d)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector at angle `theta` from the x axis.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Vec2 { x: c, y: s }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    /// Angle of the vector from the x axis, wrapped to `[0, 2π)`.
    pub fn angle(self) -> f64 {
        wrap_angle(self.y.atan2(self.x))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Convex region the swarm lives in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum Boundary {
    Circle { center: Vec2, radius: f64 },
    /// Counterclockwise vertex list; the closing edge is implicit.
    Polygon { vertices: Vec<Vec2> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub boundary: Boundary,
}

impl Environment {
    pub fn circle(center: Vec2, radius: f64) -> Self {
        Environment { boundary: Boundary::Circle { center, radius } }
    }

    /// Axis-aligned rectangle `[min.x, max.x] × [min.y, max.y]`.
    pub fn rectangle(min: Vec2, max: Vec2) -> Self {
        Environment {
            boundary: Boundary::Polygon {
                vertices: vec![
                    min,
                    Vec2::new(max.x, min.y),
                    max,
                    Vec2::new(min.x, max.y),
                ],
            },
        }
    }

    /// Checks radius positivity, or polygon closure, convexity and orientation.
    pub fn validate(&self) -> Result<(), WorldError> {
        match &self.boundary {
            Boundary::Circle { center, radius } => {
                if !center.is_finite() || !(radius.is_finite() && *radius > 0.0) {
                    return Err(WorldError::InvalidEnvironment(format!(
                        "circle radius must be positive and finite, got {radius}"
                    )));
                }
            }
            Boundary::Polygon { vertices } => {
                let n = vertices.len();
                if n < 3 {
                    return Err(WorldError::InvalidEnvironment(format!(
                        "polygon needs at least 3 vertices, got {n}"
                    )));
                }
                if vertices.iter().any(|v| !v.is_finite()) {
                    return Err(WorldError::InvalidEnvironment("non-finite polygon vertex".into()));
                }
                for i in 0..n {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    let c = vertices[(i + 2) % n];
                    if (b - a).cross(c - b) <= 0.0 {
                        return Err(WorldError::InvalidEnvironment(format!(
                            "polygon is not strictly convex and counterclockwise at vertex {}",
                            (i + 1) % n
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Distance to the boundary; positive inside, negative outside.
    pub fn signed_distance(&self, point: Vec2) -> f64 {
        match &self.boundary {
            Boundary::Circle { center, radius } => radius - point.distance(*center),
            Boundary::Polygon { vertices } => {
                // For a convex polygon the nearest supporting line gives the
                // interior distance.
                let n = vertices.len();
                (0..n)
                    .map(|i| {
                        let a = vertices[i];
                        let b = vertices[(i + 1) % n];
                        let edge = b - a;
                        edge.cross(point - a) / edge.norm()
                    })
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn contains(&self, point: Vec2) -> bool {
        self.signed_distance(point) > 0.0
    }

    pub fn distance_to_boundary(&self, point: Vec2) -> Result<f64, WorldError> {
        let d = self.signed_distance(point);
        if d < 0.0 || !d.is_finite() {
            return Err(WorldError::Containment { x: point.x, y: point.y });
        }
        Ok(d)
    }

    /// Axis-aligned bounding box as `(min, max)`.
    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        match &self.boundary {
            Boundary::Circle { center, radius } => (
                Vec2::new(center.x - radius, center.y - radius),
                Vec2::new(center.x + radius, center.y + radius),
            ),
            Boundary::Polygon { vertices } => {
                let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
                let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
                for v in vertices {
                    lo.x = lo.x.min(v.x);
                    lo.y = lo.y.min(v.y);
                    hi.x = hi.x.max(v.x);
                    hi.y = hi.y.max(v.y);
                }
                (lo, hi)
            }
        }
    }
}

/// A disk target with its encapsulation annulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub center: Vec2,
    pub body_radius: f64,
    /// Inner (exclusive) radius of the annulus.
    pub safe_radius: f64,
    /// Outer (inclusive) radius of the annulus.
    pub encap_radius: f64,
    pub required_robots: usize,
    #[serde(default)]
    pub encapsulated: bool,
}

impl Target {
    pub fn emitting(&self) -> bool {
        !self.encapsulated
    }

    pub fn validate(&self, index: usize) -> Result<(), WorldError> {
        let fail = |reason: String| Err(WorldError::InvalidTarget { index, reason });
        if !self.center.is_finite() {
            return fail("non-finite center".into());
        }
        if !(self.body_radius >= 0.0) {
            return fail(format!("body radius {} must be nonnegative", self.body_radius));
        }
        if !(self.safe_radius > self.body_radius) {
            return fail(format!(
                "safe radius {} must exceed body radius {}",
                self.safe_radius, self.body_radius
            ));
        }
        if !(self.encap_radius > self.safe_radius) {
            return fail(format!(
                "encapsulation radius {} must exceed safe radius {}",
                self.encap_radius, self.safe_radius
            ));
        }
        if self.required_robots == 0 {
            return fail("required robot count must be at least 1".into());
        }
        Ok(())
    }
}

/// Body-frame sensor angles, counterclockwise and strictly increasing in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorRing {
    angles: Vec<f64>,
}

impl SensorRing {
    pub fn new(angles: Vec<f64>) -> Result<Self, WorldError> {
        if angles.len() < 2 {
            return Err(WorldError::InvalidSensors(format!(
                "need at least 2 sensors, got {}",
                angles.len()
            )));
        }
        if angles.iter().any(|a| !(0.0..TAU).contains(a)) {
            return Err(WorldError::InvalidSensors("sensor angles must lie in [0, 2π)".into()));
        }
        if angles.windows(2).any(|w| w[1] <= w[0]) {
            return Err(WorldError::InvalidSensors("sensor angles must be strictly increasing".into()));
        }
        Ok(SensorRing { angles })
    }

    /// `count` sensors spaced `2π/count` apart, the first at `offset`.
    pub fn symmetric(count: usize, offset: f64) -> Result<Self, WorldError> {
        if count < 2 {
            return Err(WorldError::InvalidSensors(format!("need at least 2 sensors, got {count}")));
        }
        let mut angles: Vec<f64> =
            (0..count).map(|k| wrap_angle(offset + TAU * k as f64 / count as f64)).collect();
        angles.sort_by(f64::total_cmp);
        SensorRing::new(angles)
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn angle(&self, k: usize) -> f64 {
        self.angles[k]
    }

    /// Angular gap from sensor `k - 1` up to sensor `k` (wrapping).
    pub fn gap_before(&self, k: usize) -> f64 {
        let p = self.len();
        let prev = self.angles[(k + p - 1) % p];
        let g = wrap_angle(self.angles[k] - prev);
        if g == 0.0 {
            TAU
        } else {
            g
        }
    }

    /// Angular gap from sensor `k` up to sensor `k + 1` (wrapping).
    pub fn gap_after(&self, k: usize) -> f64 {
        self.gap_before((k + 1) % self.len())
    }

    /// Half of the larger of the two gaps adjacent to sensor `k`.
    pub fn max_half_gap_at(&self, k: usize) -> f64 {
        0.5 * self.gap_before(k).max(self.gap_after(k))
    }

    /// Half of the largest adjacent gap anywhere on the ring.
    pub fn max_half_gap(&self) -> f64 {
        (0..self.len()).map(|k| 0.5 * self.gap_before(k)).fold(0.0, f64::max)
    }
}

/// When a robot senses and acts, in global ticks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub period: u32,
    pub start_offset: u32,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule { period: 1, start_offset: 0 }
    }
}

impl Schedule {
    pub fn is_due(&self, tick: u64) -> bool {
        let offset = u64::from(self.start_offset);
        tick >= offset && (tick - offset).is_multiple_of(u64::from(self.period.max(1)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobotState {
    pub center: Vec2,
    /// Heading in `[0, 2π)`.
    pub heading: f64,
    pub body_radius: f64,
    pub sensors: SensorRing,
    pub frozen: bool,
    pub schedule: Schedule,
}

impl RobotState {
    /// World-frame position of sensor `k`.
    pub fn sensor_position(&self, k: usize) -> Vec2 {
        self.center + Vec2::from_angle(self.heading + self.sensors.angle(k)) * self.body_radius
    }
}

/// Turn-then-move command. `turn` is a body-frame direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlCommand {
    pub turn: f64,
    pub distance: f64,
}

impl ControlCommand {
    pub const STAY: ControlCommand = ControlCommand { turn: 0.0, distance: 0.0 };
}

/// Unicycle update: rotate by `cmd.turn`, then advance `cmd.distance` along the new heading.
pub fn apply_command(robot: &RobotState, cmd: ControlCommand) -> RobotState {
    debug_assert!(!robot.frozen, "frozen robots never move");
    let heading = wrap_angle(robot.heading + cmd.turn);
    RobotState {
        center: robot.center + Vec2::from_angle(heading) * cmd.distance,
        heading,
        ..robot.clone()
    }
}

/// Strict lower, inclusive upper bound on the center distance.
pub fn in_annulus(robot: &RobotState, target: &Target) -> bool {
    let d = robot.center.distance(target.center);
    target.safe_radius < d && d <= target.encap_radius
}

#[derive(Debug, Clone, PartialEq)]
pub struct World {
    pub environment: Environment,
    pub targets: Vec<Target>,
    pub robots: Vec<RobotState>,
}

impl World {
    pub fn annulus_count(&self, target: &Target) -> usize {
        self.robots.iter().filter(|r| in_annulus(r, target)).count()
    }

    /// Encapsulates every emitting target whose annulus holds at least its
    /// required robot count and freezes all robots inside that annulus.
    /// Returns the indices of the targets encapsulated by this call.
    pub fn check_encapsulation(&mut self) -> Vec<usize> {
        let mut newly = Vec::new();
        for (gi, target) in self.targets.iter_mut().enumerate() {
            if !target.emitting() {
                continue;
            }
            let inside: Vec<usize> = self
                .robots
                .iter()
                .enumerate()
                .filter(|(_, r)| in_annulus(r, target))
                .map(|(i, _)| i)
                .collect();
            if inside.len() >= target.required_robots {
                target.encapsulated = true;
                for i in inside {
                    self.robots[i].frozen = true;
                }
                newly.push(gi);
            }
        }
        newly
    }

    pub fn all_encapsulated(&self) -> bool {
        self.targets.iter().all(|t| t.encapsulated)
    }
}
