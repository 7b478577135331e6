//! Narrow phase as a convex minimum-distance program.
//!
//! The squared distance between a point of body A and a point of a shrunk
//! copy of body B is minimized by alternating exact projections onto the two
//! sets. Because the shrunk copy stays disjoint from A for moderate overlap,
//! the true interpenetration is recovered as `b − φ*`, where `b` is the
//! amount removed from B and `φ*` the minimum distance to the shrunk copy.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::contact::{planar_tangent, spatial_tangent, ContactInfo, LocalContact};
use crate::error::{Error, Result};
use crate::geometry::{Pose, Shape, Vec3, EPS_DEG};
use crate::sat;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverSettings {
    /// Convergence threshold on iterate displacement, meters.
    pub tol: f64,
    pub max_iters: usize,
    /// Shrink margin as a fraction of the radius (or smaller half-extent).
    pub shrink_fraction: f64,
    /// Absolute shrink margin in meters; overrides `shrink_fraction`.
    pub shrink_margin: Option<f64>,
    pub warm_start: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self { tol: 1e-10, max_iters: 10_000, shrink_fraction: 0.5, shrink_margin: None, warm_start: true }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidSettings(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidSettings("max_iters must be at least 1".into()));
        }
        if !(self.shrink_fraction > 0.0 && self.shrink_fraction < 1.0) {
            return Err(Error::InvalidSettings(format!(
                "shrink_fraction must lie in (0, 1), got {}",
                self.shrink_fraction
            )));
        }
        if let Some(b) = self.shrink_margin {
            if !(b > 0.0 && b.is_finite()) {
                return Err(Error::InvalidSettings(format!("shrink_margin must be positive, got {b}")));
            }
        }
        Ok(())
    }

    /// Shrink margin for a body whose limiting dimension is `size`.
    pub fn margin_for(&self, size: f64) -> Result<f64> {
        let b = self.shrink_margin.unwrap_or(self.shrink_fraction * size);
        if b > 0.0 && b < size {
            Ok(b)
        } else {
            Err(Error::InvalidSettings(format!("shrink margin {b} must lie in (0, {size})")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverResult {
    /// Minimum-distance point on the first set.
    pub p_tilde: Vec3,
    /// Minimum-distance point on the second (shrunk) set.
    pub q_star: Vec3,
    /// Surrogate proximity `‖p̃ − q̃*‖`, snapped to zero below `tol`.
    pub phi_star: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// A closed convex set with an exact Euclidean projection.
pub trait ConvexSet {
    fn project(&self, p: &Vec3) -> Vec3;
}

/// Oriented box; planar rectangles use a zero third half-extent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxSet {
    pub center: Vec3,
    /// Maps box-frame directions into the working frame.
    pub rotation: Matrix3<f64>,
    pub half_extents: Vec3,
}

impl BoxSet {
    pub fn rectangle(c1: f64, c2: f64) -> Self {
        Self { center: Vec3::zeros(), rotation: Matrix3::identity(), half_extents: Vec3::new(c1, c2, 0.0) }
    }

    pub fn cuboid(half_extents: [f64; 3]) -> Self {
        Self { center: Vec3::zeros(), rotation: Matrix3::identity(), half_extents: Vec3::from(half_extents) }
    }
}

impl ConvexSet for BoxSet {
    fn project(&self, p: &Vec3) -> Vec3 {
        let local = self.rotation.transpose() * (p - self.center);
        let clamped = Vec3::from_fn(|i, _| local[i].clamp(-self.half_extents[i], self.half_extents[i]));
        self.center + self.rotation * clamped
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallSet {
    pub center: Vec3,
    pub radius: f64,
}

impl ConvexSet for BallSet {
    fn project(&self, p: &Vec3) -> Vec3 {
        project_onto_ball(p, &self.center, self.radius)
    }
}

/// Per-component clamp onto `[−c1, c1] × [−c2, c2]`.
pub fn project_onto_rectangle(p: &Vec3, c1: f64, c2: f64) -> Vec3 {
    Vec3::new(p.x.clamp(-c1, c1), p.y.clamp(-c2, c2), p.z)
}

/// Radial projection onto a closed ball. A point within `EPS_DEG` of the
/// center has no radial direction and maps to `center + radius·x̂`.
pub fn project_onto_ball(p: &Vec3, center: &Vec3, radius: f64) -> Vec3 {
    let d = p - center;
    let norm = d.norm();
    if norm < EPS_DEG {
        return center + Vec3::x() * radius;
    }
    if norm <= radius {
        return *p;
    }
    center + d * (radius / norm)
}

/// Alternating projections `p ← Π_A(q)`, `q ← Π_B(p)` starting from `Π_B(start)`.
///
/// When successive steps shrink geometrically along a fixed direction, an
/// extrapolated jump toward the limit is tried and kept only if it does not
/// increase the pair distance, so the distance sequence stays monotone.
/// `observe` receives the iterate pair `(p, q)` after every accepted update.
pub fn alternating_projections<A: ConvexSet, B: ConvexSet>(
    a: &A,
    b: &B,
    start: &Vec3,
    settings: &SolverSettings,
    observe: &mut dyn FnMut(&Vec3, &Vec3),
) -> Result<SolverResult> {
    let mut q = b.project(start);
    let mut p = a.project(&q);
    q = b.project(&p);
    observe(&p, &q);

    let mut prev_step: Option<Vec3> = None;
    for iter in 2..=settings.max_iters {
        let p_next = a.project(&q);
        let q_next = b.project(&p_next);
        let step_p = (p_next - p).norm();
        let step = q_next - q;
        p = p_next;
        q = q_next;
        let dist = (p - q).norm();
        observe(&p, &q);
        if step_p < settings.tol && step.norm() < settings.tol {
            return Ok(finish(p, q, iter, settings));
        }

        match prev_step {
            Some(prev) => {
                let (ns, np) = (step.norm(), prev.norm());
                let ratio = ns / np;
                let aligned = np > 0.0 && ns > 0.0 && step.dot(&prev) > 0.99 * ns * np;
                if aligned && ratio < 1.0 {
                    let q_jump = b.project(&(q + step * (ratio / (1.0 - ratio))));
                    let p_jump = a.project(&q_jump);
                    let q_jump = b.project(&p_jump);
                    let d_jump = (p_jump - q_jump).norm();
                    if d_jump <= dist {
                        p = p_jump;
                        q = q_jump;
                        observe(&p, &q);
                        prev_step = None;
                        continue;
                    }
                }
                prev_step = Some(step);
            }
            None => prev_step = Some(step),
        }
    }
    Err(Error::NotConverged { iterations: settings.max_iters })
}

fn finish(p: Vec3, q: Vec3, iterations: usize, settings: &SolverSettings) -> SolverResult {
    let d = (p - q).norm();
    SolverResult {
        p_tilde: p,
        q_star: q,
        phi_star: if d < settings.tol { 0.0 } else { d },
        iterations,
        converged: true,
    }
}

/// Closest pair between the rectangle `[−c1, c1] × [−c2, c2]` and the ball
/// of radius `r_star` at `center`, cold-started from the rectangle centroid.
pub fn min_distance_pair(c1: f64, c2: f64, center: &Vec3, r_star: f64, settings: &SolverSettings) -> Result<SolverResult> {
    alternating_projections(
        &BoxSet::rectangle(c1, c2),
        &BallSet { center: *center, radius: r_star },
        &Vec3::zeros(),
        settings,
        &mut |_, _| {},
    )
}

/// Interpenetration recovered from the surrogate proximity; the flag is set
/// when the shrunk shape itself touches A and the depth is only known to be ≥ b.
pub fn rho_from_surrogate(phi_star: f64, b: f64) -> (f64, bool) {
    if phi_star > b {
        (0.0, false)
    } else if phi_star > 0.0 {
        (b - phi_star, false)
    } else {
        (b, true)
    }
}

/// Unit direction from `p̃` to `q̃*` and its in-plane tangent.
pub fn normal_tangent(p_tilde: &Vec3, q_star: &Vec3) -> Result<(Vec3, Vec3)> {
    let d = q_star - p_tilde;
    let norm = d.norm();
    if norm <= EPS_DEG {
        return Err(Error::DegenerateDirection);
    }
    let n = d / norm;
    Ok((n, planar_tangent(&n)))
}

/// Previous solution of one body pair, used to seed the next solve.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct WarmStart {
    entry: Option<(Vec3, Vec3)>,
}

impl WarmStart {
    fn seed(&self, q: &Vec3, b: f64, fallback: Vec3) -> Vec3 {
        match self.entry {
            Some((q_prev, star_prev)) if (q - q_prev).norm() < 10.0 * b => star_prev + (q - q_prev),
            _ => fallback,
        }
    }

    fn store(&mut self, q: Vec3, q_star: Vec3) {
        self.entry = Some((q, q_star));
    }
}

/// Convex-program narrow phase for a supported ordered pair.
///
/// Supported orderings: rectangle–circle, circle–circle, rectangle–rectangle
/// and cuboid–sphere. The reverse orderings are handled by the caller.
pub fn detect_convex(
    pose_a: &Pose,
    shape_a: &Shape,
    pose_b: &Pose,
    shape_b: &Shape,
    settings: &SolverSettings,
    warm: Option<&mut WarmStart>,
) -> Result<ContactInfo> {
    let q = pose_a.to_local(&pose_b.position);
    let use_warm = settings.warm_start && warm.is_some();
    let mut scratch = WarmStart::default();
    let cache = match warm {
        Some(w) if use_warm => w,
        _ => &mut scratch,
    };

    let local = match (*shape_a, *shape_b) {
        (Shape::Rectangle { half_length, half_width }, Shape::Circle { radius }) => {
            let b = settings.margin_for(radius)?;
            let set_b = BallSet { center: q, radius: radius - b };
            let start = cache.seed(&q, b, Vec3::zeros());
            let res = alternating_projections(&BoxSet::rectangle(half_length, half_width), &set_b, &start, settings, &mut |_, _| {})?;
            cache.store(q, res.q_star);
            ball_contact(&res, &q, radius, b, || sat::rect_circle_normal(&q, half_length, half_width).0, planar_tangent)
        }
        (Shape::Circle { radius: ra }, Shape::Circle { radius: rb }) => {
            let b = settings.margin_for(rb)?;
            let set_a = BallSet { center: Vec3::zeros(), radius: ra };
            let set_b = BallSet { center: q, radius: rb - b };
            let start = cache.seed(&q, b, Vec3::zeros());
            let res = alternating_projections(&set_a, &set_b, &start, settings, &mut |_, _| {})?;
            cache.store(q, res.q_star);
            ball_contact(&res, &q, rb, b, || center_direction(&q), planar_tangent)
        }
        (Shape::Cuboid { half_extents }, Shape::Sphere { radius }) => {
            let b = settings.margin_for(radius)?;
            let set_b = BallSet { center: q, radius: radius - b };
            let start = cache.seed(&q, b, Vec3::zeros());
            let res = alternating_projections(&BoxSet::cuboid(half_extents), &set_b, &start, settings, &mut |_, _| {})?;
            cache.store(q, res.q_star);
            ball_contact(&res, &q, radius, b, || nearest_face_normal(&q, &half_extents), spatial_tangent)
        }
        (Shape::Rectangle { half_length: a1, half_width: a2 }, Shape::Rectangle { half_length: b1, half_width: b2 }) => {
            let b = settings.margin_for(b1.min(b2))?;
            let rotation = pose_a.orientation.body_from_world() * pose_b.orientation.world_from_body();
            let set_a = BoxSet::rectangle(a1, a2);
            let set_b = BoxSet { center: q, rotation, half_extents: Vec3::new(b1 - b, b2 - b, 0.0) };
            let start = cache.seed(&q, b, Vec3::zeros());
            let res = alternating_projections(&set_a, &set_b, &start, settings, &mut |_, _| {})?;
            cache.store(q, res.q_star);
            let (rho, saturated) = rho_from_surrogate(res.phi_star, b);
            let n = match normal_tangent(&res.p_tilde, &res.q_star) {
                Ok((n, _)) => n,
                Err(_) => center_direction(&q),
            };
            let p_tilde = res.p_tilde;
            let q_tilde = res.q_star - n * b;
            LocalContact {
                phi: if saturated { -b } else { res.phi_star - b },
                rho,
                phi_exact: false,
                saturated,
                p_tilde,
                q_tilde,
                p_anchor: p_tilde,
                q_anchor: q_tilde - q,
                normal: n,
                tangent: planar_tangent(&n),
            }
        }
        (a, b) => return Err(Error::UnsupportedPair(a.kind(), b.kind())),
    };
    Ok(local.into_contact(pose_a))
}

/// Assemble the contact for a shrunk ball of true radius `radius` centered at `q`.
fn ball_contact(
    res: &SolverResult,
    q: &Vec3,
    radius: f64,
    b: f64,
    fallback_normal: impl Fn() -> Vec3,
    tangent_of: fn(&Vec3) -> Vec3,
) -> LocalContact {
    let (rho, saturated) = rho_from_surrogate(res.phi_star, b);
    let n = match normal_tangent(&res.p_tilde, &res.q_star) {
        Ok((n, _)) => n,
        Err(_) => fallback_normal(),
    };
    let q_tilde = sat::circle_mdp(&res.p_tilde, q, radius).unwrap_or(q - n * radius);
    LocalContact {
        phi: if saturated { -b } else { res.phi_star - b },
        rho,
        phi_exact: true,
        saturated,
        p_tilde: res.p_tilde,
        q_tilde,
        p_anchor: res.p_tilde,
        q_anchor: q_tilde - q,
        normal: n,
        tangent: tangent_of(&n),
    }
}

fn center_direction(q: &Vec3) -> Vec3 {
    let n = q.norm();
    if n < EPS_DEG {
        Vec3::x()
    } else {
        q / n
    }
}

/// Outward normal of the face closest to `q`, relative to the half-extents.
fn nearest_face_normal(q: &Vec3, half_extents: &[f64; 3]) -> Vec3 {
    let axis = (0..3)
        .map(|i| (i, half_extents[i] - q[i].abs()))
        .fold((0, f64::INFINITY), |acc, (i, d)| if d < acc.1 { (i, d) } else { acc })
        .0;
    let mut n = Vec3::zeros();
    n[axis] = crate::geometry::sgn(q[axis]);
    n
}
