//! Self-contained SVG rendering of planar trajectories.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{BodyState, Shape, Vec3};
use crate::sim::Trajectory;

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 20.0;
const SNAPSHOTS: usize = 8;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Render body outlines at evenly spaced instants plus center-of-mass paths.
pub fn render_svg(traj: &Trajectory) -> Result<String> {
    if !traj.is_planar() {
        return Err(Error::Unsupported3D);
    }
    let (mut lo, mut hi) = (Vec3::repeat(f64::INFINITY), Vec3::repeat(f64::NEG_INFINITY));
    for s in &traj.samples {
        for (st, shape) in s.states.iter().zip(&traj.shapes) {
            let r = shape.bounding_radius();
            lo = lo.inf(&(st.pose.position - Vec3::repeat(r)));
            hi = hi.sup(&(st.pose.position + Vec3::repeat(r)));
        }
    }
    if traj.samples.is_empty() {
        lo = Vec3::repeat(-1.0);
        hi = Vec3::repeat(1.0);
    }
    let span_x = (hi.x - lo.x).max(1e-9);
    let span_y = (hi.y - lo.y).max(1e-9);
    let scale = (WIDTH - 2.0 * MARGIN) / span_x;
    let height = span_y * scale + 2.0 * MARGIN;
    let px = |p: &Vec3| (MARGIN + (p.x - lo.x) * scale, MARGIN + (hi.y - p.y) * scale);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let n = traj.samples.len();
    let snapshot_idx: Vec<usize> = if n == 0 {
        vec![]
    } else {
        let mut v: Vec<usize> = (0..SNAPSHOTS).map(|k| k * (n - 1) / (SNAPSHOTS - 1).max(1)).collect();
        v.dedup();
        v
    };

    for (id, shape) in traj.shapes.iter().enumerate() {
        let color = COLORS[id % COLORS.len()];
        for &k in &snapshot_idx {
            let st = &traj.samples[k].states[id];
            outline(&mut svg, shape, st, color, scale, &px);
        }
        let points: Vec<String> = traj
            .samples
            .iter()
            .map(|s| {
                let (x, y) = px(&s.states[id].pose.position);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="path" data-body="{id}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn outline(svg: &mut String, shape: &Shape, st: &BodyState, color: &str, scale: f64, px: &dyn Fn(&Vec3) -> (f64, f64)) {
    match *shape {
        Shape::Circle { radius } => {
            let (cx, cy) = px(&st.pose.position);
            let _ = writeln!(
                svg,
                r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="none" stroke="{color}" stroke-opacity="0.4"/>"#,
                radius * scale
            );
        }
        Shape::Rectangle { half_length, half_width } => {
            let (corners, _) = crate::sat::rect_world_geometry(&st.pose, half_length, half_width);
            let pts: Vec<String> = corners
                .iter()
                .map(|c| {
                    let (x, y) = px(c);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(
                svg,
                r#"<polygon points="{}" fill="none" stroke="{color}" stroke-opacity="0.4"/>"#,
                pts.join(" ")
            );
        }
        Shape::Sphere { .. } | Shape::Cuboid { .. } => {}
    }
}

pub fn export_plot(traj: &Trajectory, path: &Path) -> Result<()> {
    let svg = render_svg(traj)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}
