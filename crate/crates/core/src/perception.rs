//! Robot-side estimation: turning raw intensities into a conservative
//! distance to a "virtual source" and the arc of body-frame bearings it can
//! lie in. This is the only knowledge of the world a robot ever has.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::signal::SignalKernel;
use crate::world::{angle_distance, wrap_angle, SensorRing};

/// Counterclockwise arc of angles starting at `start` and spanning `width`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularInterval {
    start: f64,
    width: f64,
}

impl AngularInterval {
    /// Arc from `start` counterclockwise to `end`. Equal endpoints give a zero-width arc.
    pub fn new(start: f64, end: f64) -> Self {
        AngularInterval { start: wrap_angle(start), width: wrap_angle(end - start) }
    }

    pub fn from_start_width(start: f64, width: f64) -> Self {
        AngularInterval { start: wrap_angle(start), width: width.clamp(0.0, TAU) }
    }

    pub fn full() -> Self {
        AngularInterval { start: 0.0, width: TAU }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        wrap_angle(self.start + self.width)
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn midpoint(&self) -> f64 {
        wrap_angle(self.start + 0.5 * self.width)
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.width >= TAU || wrap_angle(theta - self.start) <= self.width
    }

    /// The same arc rotated by `delta`.
    pub fn rotated(&self, delta: f64) -> Self {
        AngularInterval { start: wrap_angle(self.start + delta), width: self.width }
    }

    /// `n` evenly spaced angles covering the arc, both endpoints included.
    pub fn samples(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let step = if n > 1 { self.width / (n - 1) as f64 } else { 0.0 };
        (0..n).map(move |i| wrap_angle(self.start + step * i as f64))
    }

    /// Largest angular distance from `theta` to any point of the arc.
    pub fn farthest_from(&self, theta: f64) -> f64 {
        let a = angle_distance(theta, self.start);
        let b = angle_distance(theta, self.end());
        let antipode = wrap_angle(theta + std::f64::consts::PI);
        if self.contains(antipode) {
            std::f64::consts::PI
        } else {
            a.max(b)
        }
    }
}

/// Distance from the robot center to the closest admissible virtual source.
///
/// `sensor_distance` is the kernel inverse of sensor `k`'s reading and
/// `half_gap` the largest angle the source can sit off the sensor ray. If the
/// reading is too strong for any consistent placement the source is taken to
/// be at the robot center.
pub fn virtual_source_distance(sensor_distance: f64, body_radius: f64, half_gap: f64) -> f64 {
    let (s, c) = half_gap.sin_cos();
    let lateral = body_radius * s;
    if sensor_distance < lateral.abs() {
        return 0.0;
    }
    let d = body_radius * c + (sensor_distance * sensor_distance - lateral * lateral).sqrt();
    d.max(0.0)
}

/// Index of the largest positive reading; ties go to the lowest index.
pub fn strongest_sensor(readings: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (k, &z) in readings.iter().enumerate() {
        if z > 0.0 && best.is_none_or(|b| z > readings[b]) {
            best = Some(k);
        }
    }
    best
}

/// Index of the smallest reading; ties go to the lowest index.
pub fn weakest_sensor(readings: &[f64]) -> usize {
    let mut best = 0;
    for (k, &z) in readings.iter().enumerate() {
        if z < readings[best] {
            best = k;
        }
    }
    best
}

/// Body-frame arc that must contain a lone source seen strongest by sensor `k`.
pub fn bearing_arc(k: usize, sensors: &SensorRing) -> AngularInterval {
    let left = 0.5 * sensors.gap_before(k);
    let right = 0.5 * sensors.gap_after(k);
    AngularInterval::from_start_width(sensors.angle(k) - left, left + right)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VirtualSourceEstimate {
    pub sensor_index: usize,
    /// Kernel inverse of the strongest reading.
    pub sensor_distance: f64,
    /// Conservative distance from the robot center.
    pub center_distance: f64,
    pub bearing_arc: AngularInterval,
}

/// Virtual-source estimate from the strongest sensor, or `None` with no signal.
pub fn estimate(
    readings: &[f64],
    kernel: &SignalKernel,
    sensors: &SensorRing,
    body_radius: f64,
) -> Option<VirtualSourceEstimate> {
    let k = strongest_sensor(readings)?;
    let sensor_distance = kernel.inverse(readings[k])?;
    Some(VirtualSourceEstimate {
        sensor_index: k,
        sensor_distance,
        center_distance: virtual_source_distance(sensor_distance, body_radius, sensors.max_half_gap_at(k)),
        bearing_arc: bearing_arc(k, sensors),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::Vec2;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    /// Law-of-cosines oracle: put the source `sensor_distance` from a sensor on
    /// the x axis at radius `r`, at angle `off` from the robot center, and read
    /// off the center distance.
    fn placed_source_center_distance(sensor_distance: f64, r: f64, off: f64) -> f64 {
        // solve |S - A| = sensor_distance with S = D·(cos off, sin off), A = (r, 0)
        let mut lo: f64 = 0.0;
        let mut hi = r + sensor_distance + 1.0;
        let f = |d: f64| (Vec2::from_angle(off) * d).distance(Vec2::new(r, 0.0)) - sensor_distance;
        lo = lo.max(r * off.cos());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn collinear_source() {
        assert_abs_diff_eq!(virtual_source_distance(10.0, 1.0, 0.0), 11.0, epsilon = 1e-14);
    }

    #[test]
    fn off_axis_source_matches_oracle() {
        let expected = 10.682_075_452_816_55;
        assert_abs_diff_eq!(placed_source_center_distance(10.0, 1.0, FRAC_PI_4), expected, epsilon = 1e-10);
        assert_abs_diff_eq!(virtual_source_distance(10.0, 1.0, FRAC_PI_4), expected, epsilon = 1e-12);
    }

    #[test]
    fn at_sensor_source_collapses_to_zero() {
        assert_eq!(virtual_source_distance(0.0, 1.0, 0.3), 0.0);
        assert_eq!(virtual_source_distance(0.1, 1.0, FRAC_PI_2), 0.0);
    }

    #[test]
    fn strongest_sensor_rules() {
        assert_eq!(strongest_sensor(&[0.1, 0.9, 0.3]), Some(1));
        assert_eq!(strongest_sensor(&[0.0, 0.0, 0.0]), None);
        assert_eq!(strongest_sensor(&[0.5, 0.5, 0.1]), Some(0));
        assert_eq!(weakest_sensor(&[0.4, 0.1, 0.1]), 1);
    }

    #[test]
    fn symmetric_bearing_arcs() {
        let five = SensorRing::symmetric(5, 0.0).unwrap();
        let arc = bearing_arc(0, &five);
        assert_abs_diff_eq!(arc.start(), 2.0 * PI - PI / 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(arc.end(), PI / 5.0, epsilon = 1e-12);

        let four = SensorRing::symmetric(4, 0.0).unwrap();
        let arc = bearing_arc(3, &four);
        assert_abs_diff_eq!(arc.start(), 5.0 * PI / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(arc.end(), 7.0 * PI / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn asymmetric_bearing_arc() {
        let ring = SensorRing::new(vec![0.0, FRAC_PI_2, 2.0 * PI / 3.0]).unwrap();
        let arc = bearing_arc(1, &ring);
        assert_abs_diff_eq!(arc.width(), PI / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(arc.start(), FRAC_PI_4, epsilon = 1e-12);
        assert_abs_diff_eq!(arc.end(), 7.0 * PI / 12.0, epsilon = 1e-12);
    }

    #[test]
    fn interval_wraps() {
        let arc = AngularInterval::new(7.0 * PI / 4.0, PI / 4.0);
        assert_abs_diff_eq!(arc.width(), FRAC_PI_2, epsilon = 1e-12);
        assert!(arc.contains(0.0));
        assert!(arc.contains(0.1));
        assert!(arc.contains(6.0));
        assert!(!arc.contains(PI));
        let s: Vec<f64> = arc.samples(3).collect();
        assert_abs_diff_eq!(s[1], 0.0, epsilon = 1e-12);
        assert!(AngularInterval::full().contains(1.234));
        assert_abs_diff_eq!(arc.farthest_from(0.0), FRAC_PI_4, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn monotone_in_distance_and_gap(s1 in 0.0f64..20.0, s2 in 0.0f64..20.0, r in 0.01f64..2.0,
                                        h1 in 0.0f64..1.5, h2 in 0.0f64..1.5) {
            let (slo, shi) = if s1 < s2 { (s1, s2) } else { (s2, s1) };
            prop_assert!(virtual_source_distance(slo, r, h1) <= virtual_source_distance(shi, r, h1) + 1e-12);
            let (hlo, hhi) = if h1 < h2 { (h1, h2) } else { (h2, h1) };
            prop_assert!(virtual_source_distance(s1, r, hhi) <= virtual_source_distance(s1, r, hlo) + 1e-12);
        }

        #[test]
        fn lone_source_lies_in_strongest_bearing_arc(p in 3usize..16, offset in 0.0f64..TAU,
                                                     bearing in 0.0f64..TAU, dist in 0.6f64..4.0) {
            let ring = SensorRing::symmetric(p, offset).unwrap();
            let kernel = SignalKernel::linear(1.0, 5.0);
            let r = 0.5;
            let src = Vec2::from_angle(bearing) * dist;
            let z: Vec<f64> = ring.angles().iter()
                .map(|&phi| kernel.value((Vec2::from_angle(phi) * r).distance(src)))
                .collect();
            let k = strongest_sensor(&z).unwrap();
            let arc = bearing_arc(k, &ring);
            prop_assert!(arc.contains(bearing) || angle_distance(bearing, arc.start()).min(angle_distance(bearing, arc.end())) < 1e-9);
        }
    }
}
