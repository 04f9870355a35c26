//! SVG trajectory plots.

use std::fmt::Write as _;
use std::path::Path;

use super::HarnessError;
use crate::sim::TickRecord;
use crate::world::{Boundary, World};

const SIZE: f64 = 800.0;

fn color(i: usize, n: usize) -> String {
    let hue = 360.0 * i as f64 / n.max(1) as f64;
    format!("hsl({hue:.1},70%,45%)")
}

/// Boundary, target annuli, one polyline per robot and a cross where each robot froze.
///
/// `initial` is the world before the first tick; coordinates are world units
/// under a flipped-y transform so the picture matches the usual axes.
pub fn render_svg(initial: &World, trace: &[TickRecord]) -> String {
    let (lo, hi) = initial.environment.bounding_box();
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
    let pad = 0.05 * span;
    let scale = SIZE / (span + 2.0 * pad);
    let stroke = 1.5 / scale;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<g transform="translate({tx} {ty}) scale({scale} {neg})">"#,
        tx = (pad - lo.x) * scale,
        ty = (hi.y + pad) * scale,
        neg = -scale
    );

    match &initial.environment.boundary {
        Boundary::Circle { center, radius } => {
            let _ = writeln!(
                s,
                r#"<circle class="boundary" cx="{}" cy="{}" r="{}" fill="none" stroke="black" stroke-width="{stroke}"/>"#,
                center.x, center.y, radius
            );
        }
        Boundary::Polygon { vertices } => {
            let pts: Vec<String> = vertices.iter().map(|v| format!("{},{}", v.x, v.y)).collect();
            let _ = writeln!(
                s,
                r#"<polygon class="boundary" points="{}" fill="none" stroke="black" stroke-width="{stroke}"/>"#,
                pts.join(" ")
            );
        }
    }

    for t in &initial.targets {
        let (x, y) = (t.center.x, t.center.y);
        let _ = writeln!(s, r##"<circle class="encap" cx="{x}" cy="{y}" r="{}" fill="#e8f4e8" stroke="green" stroke-width="{stroke}"/>"##, t.encap_radius);
        let _ = writeln!(s, r##"<circle class="safe" cx="{x}" cy="{y}" r="{}" fill="white" stroke="orange" stroke-dasharray="{d} {d}" stroke-width="{stroke}"/>"##, t.safe_radius, d = 4.0 * stroke);
        let _ = writeln!(s, r#"<circle class="target" cx="{x}" cy="{y}" r="{}" fill="red"/>"#, t.body_radius.max(2.0 * stroke));
    }

    let n = initial.robots.len();
    for (i, r) in initial.robots.iter().enumerate() {
        let mut pts = vec![format!("{},{}", r.center.x, r.center.y)];
        pts.extend(trace.iter().map(|t| format!("{},{}", t.robots[i].x, t.robots[i].y)));
        let _ = writeln!(
            s,
            r#"<polyline class="path" points="{}" fill="none" stroke="{}" stroke-width="{stroke}"/>"#,
            pts.join(" "),
            color(i, n)
        );
        if let Some(t) = trace.iter().find(|t| t.robots[i].frozen) {
            let (x, y, a) = (t.robots[i].x, t.robots[i].y, 3.0 * stroke);
            let _ = writeln!(
                s,
                r#"<path class="freeze" d="M{} {} L{} {} M{} {} L{} {}" stroke="black" stroke-width="{stroke}"/>"#,
                x - a, y - a, x + a, y + a, x - a, y + a, x + a, y - a
            );
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}

pub fn render_trajectories(initial: &World, trace: &[TickRecord], path: &Path) -> Result<(), HarnessError> {
    std::fs::write(path, render_svg(initial, trace)).map_err(|e| HarnessError::Io { path: Some(path.to_path_buf()), source: e })
}
