//! Forward model of emission, aggregation and sensor noise.
//!
//! Each sensor only ever sees the sum of a source type's intensities at its
//! position, scaled by a multiplicative noise factor `(1 - n)`.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::world::World;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    Linear,
    TruncatedInverseSquare,
}

/// Intensity as a function of distance: strictly decreasing on `[0, influence)`,
/// zero from `influence` on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalKernel {
    pub kind: KernelKind,
    pub peak: f64,
    pub influence: f64,
}

impl SignalKernel {
    pub fn linear(peak: f64, influence: f64) -> Self {
        SignalKernel { kind: KernelKind::Linear, peak, influence }
    }

    pub fn inverse_square(peak: f64, influence: f64) -> Self {
        SignalKernel { kind: KernelKind::TruncatedInverseSquare, peak, influence }
    }

    pub fn is_valid(&self) -> bool {
        self.peak.is_finite() && self.peak > 0.0 && self.influence.is_finite() && self.influence > 0.0
    }

    pub fn value(&self, distance: f64) -> f64 {
        let beta = self.influence;
        if distance >= beta {
            return 0.0;
        }
        let d = distance.max(0.0);
        match self.kind {
            KernelKind::Linear => self.peak * (1.0 - d / beta),
            KernelKind::TruncatedInverseSquare => {
                // (d+β)^-2 - (2β)^-2, rescaled so the value at d = 0 is the peak
                let shape = beta * beta / ((d + beta) * (d + beta)) - 0.25;
                self.peak * shape / 0.75
            }
        }
    }

    /// Distance at which a lone source would produce `reading`.
    ///
    /// Returns `None` when there is no signal at all. Readings at or above the
    /// peak (possible when several sources overlap) map to distance zero.
    pub fn inverse(&self, reading: f64) -> Option<f64> {
        if !(reading > 0.0) {
            return None;
        }
        if reading >= self.peak {
            return Some(0.0);
        }
        let beta = self.influence;
        let d = match self.kind {
            KernelKind::Linear => beta * (1.0 - reading / self.peak),
            KernelKind::TruncatedInverseSquare => {
                let shape = 0.75 * reading / self.peak + 0.25;
                beta / shape.sqrt() - beta
            }
        };
        Some(d.clamp(0.0, beta))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseSharing {
    /// Fresh draw for every sensor and source type.
    #[default]
    PerSensor,
    /// One draw per source type per robot per tick.
    PerRobot,
    /// One draw per source type per tick for the whole swarm.
    PerSwarm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalClass {
    Target,
    Robot,
    Boundary,
}

impl SignalClass {
    pub fn is_static(self) -> bool {
        !matches!(self, SignalClass::Robot)
    }
}

fn default_truncation() -> f64 {
    1.0
}

/// Truncated-normal multiplicative noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    #[serde(default)]
    pub level: f64,
    #[serde(default)]
    pub sharing: NoiseSharing,
    /// Symmetric bound on `n` for robot signals.
    #[serde(default = "default_truncation")]
    pub truncation: f64,
    /// Symmetric bound on `n` for target and boundary signals.
    #[serde(default = "default_truncation")]
    pub static_truncation: f64,
    /// Rescale static thresholds by `1 - static_truncation` and grow the annuli accordingly.
    #[serde(default)]
    pub adjust_thresholds: bool,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel::noiseless()
    }
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        NoiseModel {
            level: 0.0,
            sharing: NoiseSharing::PerSensor,
            truncation: 1.0,
            static_truncation: 1.0,
            adjust_thresholds: false,
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.level == 0.0
    }

    pub fn bound(&self, class: SignalClass) -> f64 {
        if class.is_static() {
            self.static_truncation
        } else {
            self.truncation
        }
    }

    /// Samples `n ~ N(0, level²)` by rejection until `-b < n <= b`.
    pub fn draw<R: Rng + ?Sized>(&self, class: SignalClass, rng: &mut R) -> f64 {
        if self.level <= 0.0 {
            return 0.0;
        }
        let bound = self.bound(class);
        let normal = Normal::new(0.0, self.level).expect("noise level is finite and positive");
        loop {
            let n: f64 = normal.sample(rng);
            if -bound < n && n <= bound {
                return n;
            }
        }
    }

    pub fn draw_triplet<R: Rng + ?Sized>(&self, rng: &mut R) -> NoiseDraw {
        NoiseDraw {
            target: self.draw(SignalClass::Target, rng),
            robot: self.draw(SignalClass::Robot, rng),
            boundary: self.draw(SignalClass::Boundary, rng),
        }
    }
}

/// One noise sample per source type.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseDraw {
    pub target: f64,
    pub robot: f64,
    pub boundary: f64,
}

/// Per-sensor intensities `(z_g^k, z_r^k, z_e^k)` for one robot at one tick.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SensorReadings {
    pub target: Vec<f64>,
    pub robot: Vec<f64>,
    pub boundary: Vec<f64>,
}

impl SensorReadings {
    pub fn zeros(p: usize) -> Self {
        SensorReadings { target: vec![0.0; p], robot: vec![0.0; p], boundary: vec![0.0; p] }
    }

    pub fn len(&self) -> usize {
        self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target.is_empty()
    }
}

/// The three emission kernels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalField {
    pub target: SignalKernel,
    pub robot: SignalKernel,
    pub boundary: SignalKernel,
}

impl SignalField {
    /// Noiseless aggregated intensities at every sensor of robot `index`.
    ///
    /// Targets contribute only while emitting; every other robot, frozen or
    /// not, is a point source at its center. The boundary contributes through
    /// the distance from the sensor to the nearest boundary point.
    pub fn aggregate(&self, world: &World, index: usize) -> SensorReadings {
        let robot = &world.robots[index];
        let p = robot.sensors.len();
        let mut out = SensorReadings::zeros(p);
        for k in 0..p {
            let pos = robot.sensor_position(k);
            out.target[k] = world
                .targets
                .iter()
                .filter(|t| t.emitting())
                .map(|t| self.target.value(pos.distance(t.center)))
                .sum();
            out.robot[k] = world
                .robots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != index)
                .map(|(_, other)| self.robot.value(pos.distance(other.center)))
                .sum();
            let wall = world.environment.signed_distance(pos).max(0.0);
            out.boundary[k] = self.boundary.value(wall);
        }
        out
    }

    /// Aggregated intensities with noise applied according to `noise.sharing`.
    ///
    /// `swarm_draw` carries the tick's shared sample in per-swarm mode; it is
    /// ignored otherwise. Per-sensor draws are taken in sensor order, and within
    /// a sensor in target, robot, boundary order.
    pub fn sense<R: Rng + ?Sized>(
        &self,
        world: &World,
        index: usize,
        noise: &NoiseModel,
        rng: &mut R,
        swarm_draw: Option<NoiseDraw>,
    ) -> SensorReadings {
        let mut readings = self.aggregate(world, index);
        if noise.is_noiseless() {
            return readings;
        }
        let shared = match noise.sharing {
            NoiseSharing::PerSensor => None,
            NoiseSharing::PerRobot => Some(noise.draw_triplet(rng)),
            NoiseSharing::PerSwarm => Some(swarm_draw.unwrap_or_default()),
        };
        for k in 0..readings.len() {
            let n = shared.unwrap_or_else(|| noise.draw_triplet(rng));
            readings.target[k] = (readings.target[k] * (1.0 - n.target)).max(0.0);
            readings.robot[k] = (readings.robot[k] * (1.0 - n.robot)).max(0.0);
            readings.boundary[k] = (readings.boundary[k] * (1.0 - n.boundary)).max(0.0);
        }
        readings
    }
}
