//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary so the lines always reach the test output. Pass
//! criterion ids (e.g. `liveness`) as arguments to run a subset.

use std::f64::consts::{PI, TAU};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use swarm_core::bounds::{compute_d_max_bound, compute_i_safe, compute_n0, validate_config};
use swarm_core::controller::{decide, Behavior, ControllerParams, SafeDistances, Thresholds};
use swarm_core::harness::experiment::{run_experiment, ExperimentSpec, SweepValue};
use swarm_core::harness::load_config;
use swarm_core::harness::metrics::{MetricsSummary, PointSummary};
use swarm_core::perception::estimate;
use swarm_core::signal::{SignalField, SignalKernel};
use swarm_core::sim::{self, config::SimConfig};
use swarm_core::world::{apply_command, Environment, RobotState, Schedule, SensorRing, Target, Vec2, World};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn experiment(name: &str) -> MetricsSummary {
    let spec = ExperimentSpec::load(&configs().join("experiments").join(name)).expect("experiment spec loads");
    run_experiment(&spec, 0).expect("experiment runs")
}

fn demo() -> SimConfig {
    load_config(&configs().join("demo.toml")).expect("demo loads").config
}

fn row<'a>(s: &'a MetricsSummary, value: &str) -> &'a PointSummary {
    s.rows.iter().find(|r| r.sweep_value == value).unwrap_or_else(|| panic!("no row {value}"))
}

// Safety and deadlock freedom share one batch.
fn safety_batch() -> &'static MetricsSummary {
    static CELL: std::sync::OnceLock<MetricsSummary> = std::sync::OnceLock::new();
    CELL.get_or_init(|| experiment("safety.toml"))
}

fn safety() -> Verdict {
    let start = Instant::now();
    let s = safety_batch();
    let r = &s.rows[0];
    let secs = start.elapsed().as_secs_f64();
    let pass = r.runs == 100 && r.collisions_static == 0 && r.collisions_dynamic == 0 && secs < 120.0;
    verdict(
        pass,
        format!("{} runs, static {} dynamic {}, {secs:.1}s", r.runs, r.collisions_static, r.collisions_dynamic),
    )
}

fn deadlock() -> Verdict {
    let r = &safety_batch().rows[0];
    verdict(r.runs == 100 && r.stalled_ticks == 0, format!("{} stalled ticks over {} runs", r.stalled_ticks, r.runs))
}

fn liveness() -> Verdict {
    let n0 = validate_config(&demo()).n0[0].unwrap();
    let s = experiment("liveness.toml");
    let p = |n: usize| row(&s, &n.to_string()).success_prob;
    let probs: Vec<String> = (3..=9).map(|n| format!("{n}:{:.2}", p(n))).collect();
    let pass = n0 > 6.0
        && n0 < 7.0
        && (3..=6).all(|n| p(n) == 1.0)
        && (8..=9).all(|n| p(n) <= 0.05)
        && p(7) < p(6)
        && s.rows.iter().all(|r| r.runs == 100);
    verdict(pass, format!("n0 {n0:.4}; success {}", probs.join(" ")))
}

/// Non-decreasing with at most one inversion between adjacent levels.
fn mostly_nondecreasing(v: &[u64]) -> bool {
    v.windows(2).filter(|w| w[1] < w[0]).count() <= 1
}

fn noise_raw() -> Verdict {
    let s = experiment("noise-unadjusted.toml");
    let mut pass = true;
    let mut parts = Vec::new();
    for mode in ["per-sensor", "per-robot", "per-swarm"] {
        let rows: Vec<&PointSummary> = s.rows.iter().filter(|r| r.sweep_value.contains(mode)).collect();
        let stat: Vec<u64> = rows.iter().map(|r| r.collisions_static).collect();
        let dynamic: u64 = rows.iter().map(|r| r.collisions_dynamic).sum();
        pass &= rows.len() == 5 && dynamic == 0 && mostly_nondecreasing(&stat);
        parts.push(format!("{mode} static {stat:?} dynamic {dynamic}"));
    }
    verdict(pass, parts.join("; "))
}

fn noise_adjusted() -> Verdict {
    let loaded = load_config(&configs().join("noise-adjusted.toml")).unwrap();
    let adj = loaded.report.noise_adjustment.clone().expect("thresholds adjusted");
    let scaled = (adj.thresholds.target - 0.4 * loaded.report.i_safe.target).abs() < 1e-12
        && (adj.thresholds.boundary - 0.4 * loaded.report.i_safe.boundary).abs() < 1e-12;
    let s = experiment("noise-adjusted.toml");
    let total: u64 = s.rows.iter().map(|r| r.collisions_static + r.collisions_dynamic).sum();
    let runs: usize = s.rows.iter().map(|r| r.runs).sum();
    let n0 = adj.n0[0].unwrap_or(f64::NAN);
    let pass = scaled && loaded.config.noise.level == 0.15 && total == 0 && s.rows.iter().all(|r| r.runs == 100);
    verdict(pass, format!("{runs} runs at 15% noise, {total} collisions, recomputed n0 {n0:.4}"))
}

fn random_kernel(rng: &mut ChaCha8Rng) -> SignalKernel {
    let peak = rng.random_range(0.1..10.0);
    let beta = rng.random_range(0.5..20.0);
    if rng.random_bool(0.5) {
        SignalKernel::linear(peak, beta)
    } else {
        SignalKernel::inverse_square(peak, beta)
    }
}

fn virtual_source() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cases = 0;
    let mut worst = f64::NEG_INFINITY;
    while cases < 10_000 {
        let p = rng.random_range(3..=24);
        let ring = SensorRing::symmetric(p, rng.random_range(0.0..TAU)).unwrap();
        let r = rng.random_range(0.0..1.5);
        let kernel = random_kernel(&mut rng);
        let count = rng.random_range(1..=10);
        let sources: Vec<Vec2> = (0..count)
            .map(|_| Vec2::from_angle(rng.random_range(0.0..TAU)) * rng.random_range(r * 1.001 + 1e-3..r + kernel.influence * 1.2))
            .collect();
        let z: Vec<f64> = ring
            .angles()
            .iter()
            .map(|&phi| {
                let s = Vec2::from_angle(phi) * r;
                sources.iter().map(|&c| kernel.value(s.distance(c))).sum()
            })
            .collect();
        let Some(est) = estimate(&z, &kernel, &ring, r) else { continue };
        let nearest = sources.iter().map(|c| c.norm()).fold(f64::INFINITY, f64::min);
        worst = worst.max(est.center_distance - nearest);
        cases += 1;
    }
    // rounding slack only
    verdict(worst <= 1e-9, format!("{cases} constellations, max excess {worst:.3e}"))
}

fn lyapunov() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cases = 0;
    let mut worst = f64::NEG_INFINITY;
    let mut tries = 0;
    let mut fallbacks = 0;
    while cases < 1000 {
        tries += 1;
        let p = rng.random_range(3..=16);
        let ring = SensorRing::symmetric(p, rng.random_range(0.0..TAU)).unwrap();
        let r = rng.random_range(0.05..1.0);
        let kernel = random_kernel(&mut rng);
        let target = Target {
            center: Vec2::ZERO,
            body_radius: 0.0,
            safe_radius: 0.5,
            encap_radius: 1.0,
            required_robots: 1,
            encapsulated: false,
        };
        let dist = rng.random_range(r + 0.01..r + kernel.influence);
        let robot = RobotState {
            center: Vec2::from_angle(rng.random_range(0.0..TAU)) * dist,
            heading: rng.random_range(0.0..TAU),
            body_radius: r,
            sensors: ring.clone(),
            frozen: false,
            schedule: Schedule::default(),
        };
        let world = World { environment: Environment::circle(Vec2::ZERO, 1e6), targets: vec![target], robots: vec![robot] };
        let field = SignalField { target: kernel, robot: SignalKernel::linear(1.0, 1.0), boundary: SignalKernel::linear(1.0, 1.0) };
        let params = ControllerParams {
            d_max: rng.random_range(0.01..2.0),
            body_radius: r,
            safe: SafeDistances { target: 0.5, robot: 1.0, boundary: 1.0 },
            thresholds: Thresholds { target: kernel.peak * 2.0, robot: 1.0, boundary: 1.0 },
            direction_samples: 32,
            field,
        };
        let z = params.field.aggregate(&world, 0);
        let d = decide(&z, &ring, &params, &mut rng);
        if d.behavior != Behavior::Attract {
            continue;
        }
        // the least-crowded-sensor escape may back away from the target
        if d.fallback {
            fallbacks += 1;
            continue;
        }
        let next = apply_command(&world.robots[0], d.command);
        let before = world.robots[0].center.norm();
        let after = next.center.norm();
        worst = worst.max((after - before) / before);
        cases += 1;
    }
    verdict(worst <= 1e-12, format!("{cases} attraction steps ({tries} poses drawn, {fallbacks} escapes excluded), max relative increase {worst:.3e}"))
}

/// Sensor-to-source distance with the robot at the origin, the sensor on the
/// x axis and the source at center distance `rs`, bearing `h`.
fn measured_sensor_distance(rs: f64, r: f64, h: f64) -> f64 {
    Vec2::new(r, 0.0).distance(Vec2::from_angle(h) * rs)
}

fn bound_oracles() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let rel = |a: f64, b: f64| ((a - b) / b).abs();
    let (mut e10, mut e16, mut e17) = (0.0f64, 0.0f64, 0.0f64);
    let mut n = 0;
    while n < 1000 {
        let r = rng.random_range(0.05..2.0);
        let p = rng.random_range(3..=64);
        let h = PI / p as f64;
        let rs = r + rng.random_range(0.1..5.0);
        let d_max = rng.random_range(0.0..1.0);
        let kernel = random_kernel(&mut rng);
        let bound = match compute_d_max_bound(rs, r, h) {
            Ok(b) if b > 1e-3 => b,
            _ => continue,
        };
        let arg = d_max + measured_sensor_distance(rs, r, h);
        if arg > 0.99 * kernel.influence {
            continue;
        }
        let i = compute_i_safe(&kernel, rs, r, h, d_max).unwrap();
        e10 = e10.max(rel(i, kernel.value(arg)));

        // step bound: largest d keeping 2d + sensor distance below rs + the sensor's projection
        let projection = Vec2::from_angle(h).dot(Vec2::new(r, 0.0));
        let feasible = |d: f64| 2.0 * d + measured_sensor_distance(rs, r, h) < rs + projection;
        let (mut lo, mut hi) = (0.0, rs);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        e16 = e16.max(rel(bound, 0.5 * (lo + hi)));

        // capacity: the central angle whose chord is the spacing
        let encap = rng.random_range(0.5..10.0);
        let spacing = encap * rng.random_range(0.05..1.9);
        let (mut lo, mut hi) = (0.0, PI);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if Vec2::new(encap, 0.0).distance(Vec2::from_angle(mid) * encap) < spacing {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let n0 = compute_n0(spacing - r, r, encap).unwrap();
        e17 = e17.max(rel(n0, TAU / (0.5 * (lo + hi))));
        n += 1;
    }
    let limit = compute_d_max_bound(2.0, 0.5, PI / 1e4).unwrap();
    let lim_err = (limit - 0.5).abs();
    let pass = e10 <= 1e-9 && e16 <= 1e-9 && e17 <= 1e-9 && lim_err <= 1e-6 * 0.5;
    verdict(
        pass,
        format!("{n} tuples, max rel err threshold {e10:.1e} step {e16:.1e} capacity {e17:.1e}; p=1e4 step bound off r_r by {lim_err:.1e}"),
    )
}

fn sensor_trend() -> Verdict {
    let s = experiment("sensors.toml");
    let med: Vec<f64> = ["4", "8", "16"].iter().map(|v| row(&s, v).path.unwrap().median).collect();
    let pass = med[0] > med[1] && med[1] > med[2] && s.rows.iter().all(|r| r.runs == 100);
    verdict(pass, format!("median path (diameters) p=4 {:.1}, p=8 {:.1}, p=16 {:.1}", med[0], med[1], med[2]))
}

fn async_trend() -> Verdict {
    let a = experiment("async-period.toml");
    let sync1 = row(&a, "sync").ticks.unwrap().median;
    let per = row(&a, "async-period").ticks.unwrap().median;
    let b = experiment("async-offset.toml");
    let sync2 = row(&b, "2;sync").ticks.unwrap().median;
    let off = row(&b, "2;async-offset").ticks.unwrap().median;
    verdict(
        per >= sync1 && off >= sync2,
        format!("median ticks: periods {per} vs sync {sync1}; offsets {off} vs sync(2) {sync2}"),
    )
}

fn determinism() -> Verdict {
    let mut spec = ExperimentSpec::load(&configs().join("experiments/noise-unadjusted.toml")).unwrap();
    spec.runs_per_point = 10;
    spec.sweep.retain(|a| a.param != "noise.level");
    spec = spec.with_axis("noise.level", vec![SweepValue::Number(0.0), SweepValue::Number(0.15)]);
    let outputs: Vec<String> = [1, 2, 4, 1].iter().map(|&w| run_experiment(&spec, w).unwrap().to_csv_string()).collect();
    let batch_same = outputs.iter().all(|o| o == &outputs[0]);
    let c = demo();
    let run_same = sim::run(&c, true).unwrap() == sim::run(&c, true).unwrap();
    verdict(batch_same && run_same, format!("batch CSV identical over worker counts 1/2/4/1: {batch_same}; repeated run identical: {run_same}"))
}

type Criterion = (&'static str, &'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 11] = [
        ("safety", "safety, noiseless", safety),
        ("deadlock", "deadlock freedom", deadlock),
        ("liveness", "liveness threshold", liveness),
        ("noise-raw", "noise without threshold adjustment", noise_raw),
        ("noise-adjusted", "noise with adjusted thresholds", noise_adjusted),
        ("virtual-source", "virtual source never farther than nearest source", virtual_source),
        ("attraction", "attraction never increases target distance", lyapunov),
        ("bound-oracles", "closed-form bounds match geometric oracles", bound_oracles),
        ("sensor-trend", "path length falls with sensor count", sensor_trend),
        ("async-trend", "asynchrony slows completion", async_trend),
        ("determinism", "determinism across worker counts", determinism),
    ];
    let ids: Vec<&str> = criteria.iter().map(|c| c.0).collect();
    let wanted: Vec<String> = std::env::args().skip(1).filter(|a| ids.contains(&a.as_str())).collect();
    let mut failed = 0;
    for (id, name, f) in criteria {
        if !wanted.is_empty() && !wanted.iter().any(|w| w == id) {
            continue;
        }
        let start = Instant::now();
        let v = f();
        let mark = if v.pass { "PASS" } else { "FAIL" };
        if !v.pass {
            failed += 1;
        }
        println!("{mark} {id:<15} {name}: {} [{:.1}s]", v.detail, start.elapsed().as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
