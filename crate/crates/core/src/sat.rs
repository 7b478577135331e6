//! Closed-form and separating-axis narrow phase.
//!
//! The rectangle–circle test works entirely in the rectangle frame: the
//! circle center `q` is classified into one of six regions by its signed
//! distances `α`, `β` to the rectangle sides, which fixes the rectangle's
//! minimum-distance point and the contact normal.

use crate::contact::{planar_tangent, spatial_tangent, ContactInfo, LocalContact};
use crate::error::{Error, Result};
use crate::geometry::{sgn, Pose, Vec3, EPS_DEG};

/// `|α − β|` below this selects the diagonal case.
pub const EPS_TIE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    CornerOutside,
    TopBottomOutside,
    LeftRightOutside,
    InsideNearLR,
    InsideNearTB,
    InsideDiagonal,
}

impl Region {
    pub fn is_inside(self) -> bool {
        matches!(self, Region::InsideNearLR | Region::InsideNearTB | Region::InsideDiagonal)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionClass {
    pub alpha: f64,
    pub beta: f64,
    pub region: Region,
}

pub fn region_classify(q: &Vec3, c1: f64, c2: f64) -> RegionClass {
    let alpha = q.x.abs() - c1;
    let beta = q.y.abs() - c2;
    let region = match (alpha >= 0.0, beta >= 0.0) {
        (true, true) => Region::CornerOutside,
        (false, true) => Region::TopBottomOutside,
        (true, false) => Region::LeftRightOutside,
        (false, false) => {
            if (alpha - beta).abs() < EPS_TIE {
                Region::InsideDiagonal
            } else if alpha > beta {
                Region::InsideNearLR
            } else {
                Region::InsideNearTB
            }
        }
    };
    RegionClass { alpha, beta, region }
}

/// Minimum-distance point of the rectangle for a circle centered at `q`.
pub fn rect_mdp(q: &Vec3, c1: f64, c2: f64) -> Vec3 {
    let (x, y) = match region_classify(q, c1, c2).region {
        Region::CornerOutside | Region::InsideDiagonal => (sgn(q.x) * c1, sgn(q.y) * c2),
        Region::TopBottomOutside | Region::InsideNearTB => (q.x, sgn(q.y) * c2),
        Region::LeftRightOutside | Region::InsideNearLR => (sgn(q.x) * c1, q.y),
    };
    Vec3::new(x, y, 0.0)
}

/// Point of the circle boundary on the ray from `q` toward `p_tilde`.
pub fn circle_mdp(p_tilde: &Vec3, q: &Vec3, radius: f64) -> Result<Vec3> {
    let d = p_tilde - q;
    let norm = d.norm();
    if norm < EPS_DEG {
        return Err(Error::DegenerateCenter);
    }
    Ok(q + d * (radius / norm))
}

/// Proximity `φ = ‖p̃ − q‖ − R` and the matching interpenetration.
pub fn proximity_and_rho(p_tilde: &Vec3, q: &Vec3, radius: f64) -> Result<(f64, f64)> {
    let norm = (p_tilde - q).norm();
    if norm < EPS_DEG {
        return Err(Error::DegenerateCenter);
    }
    let phi = norm - radius;
    Ok((phi, rho_from_phi(phi)))
}

/// Zero for positive proximity, `|φ|` otherwise.
pub fn rho_from_phi(phi: f64) -> f64 {
    if phi > 0.0 {
        0.0
    } else {
        phi.abs()
    }
}

/// Region-table contact normal (unit length) and in-plane tangent, rectangle frame.
pub fn rect_circle_normal(q: &Vec3, c1: f64, c2: f64) -> (Vec3, Vec3) {
    let (sx, sy) = (sgn(q.x), sgn(q.y));
    let raw = match region_classify(q, c1, c2).region {
        Region::CornerOutside => Vec3::new(sx * c1, sy * c2, 0.0),
        Region::TopBottomOutside | Region::InsideNearTB => Vec3::new(0.0, sy, 0.0),
        Region::LeftRightOutside | Region::InsideNearLR => Vec3::new(sx, 0.0, 0.0),
        Region::InsideDiagonal => Vec3::new(sx, sy, 0.0),
    };
    let n = raw.normalize();
    (n, planar_tangent(&n))
}

/// Rectangle (body A, half-extents `c1`, `c2`) against circle (body B).
pub fn detect_rect_circle(pose_a: &Pose, c1: f64, c2: f64, pose_b: &Pose, radius: f64) -> ContactInfo {
    let q = pose_a.to_local(&pose_b.position);
    let class = region_classify(&q, c1, c2);
    let p_tilde = rect_mdp(&q, c1, c2);
    let (n, t) = rect_circle_normal(&q, c1, c2);

    let local = if class.region.is_inside() {
        // Center inside the rectangle: depth is measured to the nearest side.
        let depth = -class.alpha.max(class.beta);
        let rho = radius + depth;
        LocalContact {
            phi: -rho,
            rho,
            phi_exact: true,
            saturated: false,
            p_tilde,
            q_tilde: q - n * radius,
            p_anchor: p_tilde,
            q_anchor: -n * radius,
            normal: n,
            tangent: t,
        }
    } else {
        match (circle_mdp(&p_tilde, &q, radius), proximity_and_rho(&p_tilde, &q, radius)) {
            (Ok(q_tilde), Ok((phi, rho))) => LocalContact {
                phi,
                rho,
                phi_exact: true,
                saturated: false,
                p_tilde,
                q_tilde,
                p_anchor: p_tilde,
                q_anchor: q_tilde - q,
                normal: n,
                tangent: t,
            },
            _ => LocalContact {
                phi: -radius,
                rho: radius,
                phi_exact: true,
                saturated: false,
                p_tilde,
                q_tilde: q - n * radius,
                p_anchor: p_tilde,
                q_anchor: -n * radius,
                normal: n,
                tangent: t,
            },
        }
    };
    local.into_contact(pose_a)
}

/// Two circles: a single test along the line of centers.
pub fn detect_circle_circle(pose_a: &Pose, radius_a: f64, pose_b: &Pose, radius_b: f64) -> ContactInfo {
    let q = pose_a.to_local(&pose_b.position);
    let d = q.norm();
    let local = if d < EPS_DEG {
        let n = Vec3::x();
        let rho = radius_a + radius_b;
        LocalContact {
            phi: -rho,
            rho,
            phi_exact: true,
            saturated: false,
            p_tilde: n * radius_a,
            q_tilde: q - n * radius_b,
            p_anchor: n * radius_a,
            q_anchor: -n * radius_b,
            normal: n,
            tangent: planar_tangent(&n),
        }
    } else {
        let n = q / d;
        let phi = d - radius_a - radius_b;
        LocalContact {
            phi,
            rho: rho_from_phi(phi),
            phi_exact: true,
            saturated: false,
            p_tilde: n * radius_a,
            q_tilde: q - n * radius_b,
            p_anchor: n * radius_a,
            q_anchor: -n * radius_b,
            normal: n,
            tangent: planar_tangent(&n),
        }
    };
    local.into_contact(pose_a)
}

/// World-frame corners and edge axes of a rectangle.
pub(crate) fn rect_world_geometry(pose: &Pose, c1: f64, c2: f64) -> ([Vec3; 4], [Vec3; 2]) {
    let ax = pose.dir_to_world(&Vec3::x());
    let ay = pose.dir_to_world(&Vec3::y());
    let corners = [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)]
        .map(|(sx, sy)| pose.position + ax * (sx * c1) + ay * (sy * c2));
    (corners, [ax, ay])
}

/// Average of the vertices that extend furthest along `dir`.
fn support_point(vertices: &[Vec3; 4], dir: &Vec3) -> Vec3 {
    let best = vertices.iter().map(|v| v.dot(dir)).fold(f64::NEG_INFINITY, f64::max);
    let (sum, count) = vertices
        .iter()
        .filter(|v| v.dot(dir) >= best - EPS_DEG)
        .fold((Vec3::zeros(), 0.0), |(s, c), v| (s + v, c + 1.0));
    sum / count
}

/// Separating-axis test over the four edge normals of two rectangles.
pub fn detect_rect_rect(pose_a: &Pose, a: (f64, f64), pose_b: &Pose, b: (f64, f64)) -> ContactInfo {
    let (verts_a, axes_a) = rect_world_geometry(pose_a, a.0, a.1);
    let (verts_b, axes_b) = rect_world_geometry(pose_b, b.0, b.1);
    let d = pose_b.position - pose_a.position;

    let radius = |axes: &[Vec3; 2], ext: (f64, f64), u: &Vec3| ext.0 * axes[0].dot(u).abs() + ext.1 * axes[1].dot(u).abs();

    // (gap, axis, axis belongs to A)
    let mut max_gap = f64::NEG_INFINITY;
    let mut best: Option<(f64, Vec3, bool)> = None;
    for (u, owned_by_a) in axes_a.iter().map(|u| (u, true)).chain(axes_b.iter().map(|u| (u, false))) {
        let gap = d.dot(u).abs() - radius(&axes_a, a, u) - radius(&axes_b, b, u);
        max_gap = max_gap.max(gap);
        let overlap = -gap;
        if best.is_none_or(|(o, _, _)| overlap < o) {
            best = Some((overlap, *u, owned_by_a));
        }
    }
    let (overlap, axis, owned_by_a) = best.expect("four candidate axes");

    let local = if max_gap >= 0.0 {
        // Separated (or touching): report the largest gap and the nearest
        // support points along the separating direction.
        let n = if d.dot(&axis) >= 0.0 { axis } else { -axis };
        let pa = support_point(&verts_a, &n);
        let pb = support_point(&verts_b, &-n);
        let n_local = pose_a.dir_to_local(&n);
        LocalContact {
            phi: max_gap,
            rho: 0.0,
            phi_exact: false,
            saturated: false,
            p_tilde: pose_a.to_local(&pa),
            q_tilde: pose_a.to_local(&pb),
            p_anchor: pose_a.dir_to_local(&(pa - pose_a.position)),
            q_anchor: pose_a.dir_to_local(&(pb - pose_b.position)),
            normal: n_local,
            tangent: planar_tangent(&n_local),
        }
    } else {
        let n = if d.dot(&axis) >= 0.0 { axis } else { -axis };
        // The body that does not own the minimum-overlap axis penetrates with
        // its deepest vertex.
        let contact = if owned_by_a { support_point(&verts_b, &-n) } else { support_point(&verts_a, &n) };
        let n_local = pose_a.dir_to_local(&n);
        let c_local = pose_a.to_local(&contact);
        LocalContact {
            phi: -overlap,
            rho: overlap,
            phi_exact: true,
            saturated: false,
            p_tilde: c_local,
            q_tilde: c_local,
            p_anchor: c_local,
            q_anchor: pose_a.dir_to_local(&(contact - pose_b.position)),
            normal: n_local,
            tangent: planar_tangent(&n_local),
        }
    };
    local.into_contact(pose_a)
}

/// Cuboid (body A) against sphere (body B) via the per-axis clamp.
pub fn detect_sphere_cuboid(pose_a: &Pose, half_extents: [f64; 3], pose_b: &Pose, radius: f64) -> ContactInfo {
    let q = pose_a.to_local(&pose_b.position);
    let clamped = Vec3::from_fn(|i, _| q[i].clamp(-half_extents[i], half_extents[i]));
    let offset = q - clamped;
    let dist = offset.norm();

    let local = if dist < EPS_DEG {
        // Center inside (or on a face): push out through the nearest face,
        // ties broken in the order +-x, +-y, +-z.
        let (axis, depth) = (0..3)
            .map(|i| (i, half_extents[i] - q[i].abs()))
            .fold((0, f64::INFINITY), |acc, (i, d)| if d < acc.1 { (i, d) } else { acc });
        let mut n = Vec3::zeros();
        n[axis] = sgn(q[axis]);
        let mut p_tilde = q;
        p_tilde[axis] = n[axis] * half_extents[axis];
        let rho = radius + depth;
        LocalContact {
            phi: -rho,
            rho,
            phi_exact: true,
            saturated: false,
            p_tilde,
            q_tilde: q - n * radius,
            p_anchor: p_tilde,
            q_anchor: -n * radius,
            normal: n,
            tangent: spatial_tangent(&n),
        }
    } else {
        let n = offset / dist;
        let phi = dist - radius;
        LocalContact {
            phi,
            rho: rho_from_phi(phi),
            phi_exact: true,
            saturated: false,
            p_tilde: clamped,
            q_tilde: q - n * radius,
            p_anchor: clamped,
            q_anchor: -n * radius,
            normal: n,
            tangent: spatial_tangent(&n),
        }
    };
    local.into_contact(pose_a)
}
