//! Initial robot poses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use thiserror::Error;

use crate::sim::config::{Placement, SimConfig};
use crate::world::{wrap_angle, Vec2};

/// Stream id reserved for placement draws.
pub const PLACEMENT_STREAM: u64 = u64::MAX - 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlacementError {
    #[error("infeasible initial placement: {placed} of {wanted} robots placed after {attempts} attempts")]
    Infeasible { placed: usize, wanted: usize, attempts: u64 },
    #[error("robot {index} starts outside the environment")]
    Outside { index: usize },
}

/// Poses `(center, heading)` for every robot.
///
/// Sampled placements keep robots `β_r + r_r` apart and clear of targets and
/// the boundary by their safe distances, grown when thresholds are rescaled
/// for noise. Explicit placements are returned as given; only containment is
/// enforced here.
pub fn place_robots(config: &SimConfig) -> Result<Vec<(Vec2, f64)>, PlacementError> {
    match &config.robots.placement {
        Placement::Explicit { poses } => poses
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let c = Vec2::new(p.x, p.y);
                if config.environment.contains(c) {
                    Ok((c, wrap_angle(p.heading)))
                } else {
                    Err(PlacementError::Outside { index: i })
                }
            })
            .collect(),
        Placement::Sampled { max_attempts, .. } => sample(config, *max_attempts),
    }
}

fn sample(config: &SimConfig, max_attempts: u64) -> Result<Vec<(Vec2, f64)>, PlacementError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.placement_seed());
    rng.set_stream(PLACEMENT_STREAM);
    let wanted = config.robots.count;
    let spacing = config.kernels.robot.influence + config.robots.body_radius;
    let (clear_target, clear_boundary) = crate::bounds::static_clearances(config);
    let (lo, hi) = config.environment.bounding_box();
    let mut placed: Vec<(Vec2, f64)> = Vec::with_capacity(wanted);
    let mut attempts = 0;
    while placed.len() < wanted {
        if attempts >= max_attempts {
            return Err(PlacementError::Infeasible { placed: placed.len(), wanted, attempts });
        }
        attempts += 1;
        let c = Vec2::new(rng.random_range(lo.x..=hi.x), rng.random_range(lo.y..=hi.y));
        let heading = rng.random_range(0.0..TAU);
        let ok = config.environment.signed_distance(c) >= clear_boundary
            && config.targets.iter().all(|t| c.distance(t.center) >= clear_target)
            && placed.iter().all(|(q, _)| c.distance(*q) >= spacing);
        if ok {
            placed.push((c, heading));
        }
    }
    Ok(placed)
}
