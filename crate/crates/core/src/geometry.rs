//! Frames, rotations, shapes and point-containment predicates.
//!
//! Planar bodies live in the `z = 0` plane of a 3-vector so that the same
//! cross-product machinery serves both the 2D and 3D pairings. The planar
//! rotation matrix maps world coordinates into the body frame:
//!
//! ```text
//! [  cos θ   sin θ   0 ]
//! [ -sin θ   cos θ   0 ]
//! [    0       0     1 ]
//! ```
//!
//! so a body with positive `θ` is turned counter-clockwise in the world, and
//! the world-from-body map is the transpose.

use nalgebra::{Matrix3, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Distance below which two points are treated as coincident.
pub const EPS_DEG: f64 = 1e-9;

/// Sign with `sgn(0) = +1`, which keeps the region case tables total.
#[inline]
pub fn sgn(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Body-from-world rotation for a planar orientation angle.
pub fn rotation_matrix(theta: f64) -> Matrix3<f64> {
    let (s, c) = theta.sin_cos();
    Matrix3::new(c, s, 0.0, -s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Position of `r_b` expressed in the frame of a body at `r_a` with angle `theta`.
pub fn relative_center(r_a: &Vec3, theta: f64, r_b: &Vec3) -> Vec3 {
    rotation_matrix(theta) * (r_b - r_a)
}

/// Closed rectangle test in the rectangle's own frame.
pub fn contains_point_rect(p: &Vec3, c1: f64, c2: f64) -> bool {
    p.x.abs() <= c1 && p.y.abs() <= c2
}

/// Closed disc/ball test.
pub fn contains_point_circle(p: &Vec3, center: &Vec3, radius: f64) -> bool {
    (p - center).norm() <= radius
}

/// Closed box test in the box's own frame.
pub fn contains_point_cuboid(p: &Vec3, half_extents: &[f64; 3]) -> bool {
    (0..3).all(|i| p[i].abs() <= half_extents[i])
}

/// Orientation of a body. `Planar` holds the angle about the world z axis;
/// `Spatial` holds the world-from-body rotation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Planar(f64),
    Spatial(UnitQuaternion<f64>),
}

impl Orientation {
    pub fn body_from_world(&self) -> Matrix3<f64> {
        match self {
            Orientation::Planar(theta) => rotation_matrix(*theta),
            Orientation::Spatial(q) => q.inverse().to_rotation_matrix().into_inner(),
        }
    }

    pub fn world_from_body(&self) -> Matrix3<f64> {
        match self {
            Orientation::Planar(theta) => rotation_matrix(*theta).transpose(),
            Orientation::Spatial(q) => q.to_rotation_matrix().into_inner(),
        }
    }

    /// World-from-body rotation as a quaternion (planar angles map to a turn about z).
    pub fn quaternion(&self) -> UnitQuaternion<f64> {
        match self {
            Orientation::Planar(theta) => UnitQuaternion::from_axis_angle(&Vector3::z_axis(), *theta),
            Orientation::Spatial(q) => *q,
        }
    }

    pub fn is_planar(&self) -> bool {
        matches!(self, Orientation::Planar(_))
    }
}

/// Position plus orientation of a body frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose {
    pub position: Vec3,
    pub orientation: Orientation,
}

impl Pose {
    pub fn planar(x: f64, y: f64, theta: f64) -> Self {
        Self { position: Vec3::new(x, y, 0.0), orientation: Orientation::Planar(theta) }
    }

    pub fn spatial(position: Vec3, rotation: UnitQuaternion<f64>) -> Self {
        Self { position, orientation: Orientation::Spatial(rotation) }
    }

    /// World point to body-frame coordinates.
    pub fn to_local(&self, p: &Vec3) -> Vec3 {
        self.orientation.body_from_world() * (p - self.position)
    }

    /// Body-frame point to world coordinates.
    pub fn to_world(&self, p: &Vec3) -> Vec3 {
        self.position + self.orientation.world_from_body() * p
    }

    /// Rotate a body-frame direction into the world.
    pub fn dir_to_world(&self, v: &Vec3) -> Vec3 {
        self.orientation.world_from_body() * v
    }

    pub fn dir_to_local(&self, v: &Vec3) -> Vec3 {
        self.orientation.body_from_world() * v
    }
}

/// The four supported convex primitives. All extents are half-extents or radii.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Shape {
    Circle { radius: f64 },
    Rectangle { half_length: f64, half_width: f64 },
    Sphere { radius: f64 },
    Cuboid { half_extents: [f64; 3] },
}

impl Shape {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Shape::Circle { radius } | Shape::Sphere { radius } => radius.is_finite() && *radius > 0.0,
            Shape::Rectangle { half_length, half_width } => {
                half_length.is_finite() && half_width.is_finite() && *half_length > 0.0 && *half_width > 0.0
            }
            Shape::Cuboid { half_extents } => half_extents.iter().all(|c| c.is_finite() && *c > 0.0),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidShape(*self))
        }
    }

    pub fn is_planar(&self) -> bool {
        matches!(self, Shape::Circle { .. } | Shape::Rectangle { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Shape::Circle { .. } => "circle",
            Shape::Rectangle { .. } => "rectangle",
            Shape::Sphere { .. } => "sphere",
            Shape::Cuboid { .. } => "cuboid",
        }
    }

    /// Body-frame inertia of a uniform solid of the given mass.
    pub fn inertia(&self, mass: f64) -> Inertia {
        match *self {
            Shape::Circle { radius } => Inertia::Planar(0.5 * mass * radius * radius),
            Shape::Rectangle { half_length, half_width } => {
                Inertia::Planar(mass * (half_length * half_length + half_width * half_width) / 3.0)
            }
            Shape::Sphere { radius } => {
                let i = 0.4 * mass * radius * radius;
                Inertia::Spatial(Vec3::new(i, i, i))
            }
            Shape::Cuboid { half_extents: [a, b, c] } => Inertia::Spatial(Vec3::new(
                mass * (b * b + c * c) / 3.0,
                mass * (a * a + c * c) / 3.0,
                mass * (a * a + b * b) / 3.0,
            )),
        }
    }

    /// Bounding radius about the body origin.
    pub fn bounding_radius(&self) -> f64 {
        match *self {
            Shape::Circle { radius } | Shape::Sphere { radius } => radius,
            Shape::Rectangle { half_length, half_width } => half_length.hypot(half_width),
            Shape::Cuboid { half_extents: [a, b, c] } => (a * a + b * b + c * c).sqrt(),
        }
    }
}

/// Moment of inertia about the center of mass: a scalar about z for planar
/// bodies, principal moments (body frame diagonal) for spatial ones.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Inertia {
    Planar(f64),
    Spatial(Vec3),
}

/// Kinematic state and mass properties of one rigid body.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BodyState {
    pub pose: Pose,
    pub velocity: Vec3,
    pub angular_velocity: Vec3,
    pub mass: f64,
    pub inertia: Inertia,
    /// Static bodies have infinite mass and inertia.
    pub fixed: bool,
}

impl BodyState {
    pub fn at_rest(pose: Pose, mass: f64, inertia: Inertia) -> Self {
        Self { pose, velocity: Vec3::zeros(), angular_velocity: Vec3::zeros(), mass, inertia, fixed: false }
    }

    pub fn inverse_mass(&self) -> f64 {
        if self.fixed {
            0.0
        } else {
            1.0 / self.mass
        }
    }

    /// World-frame velocity of a point offset by `r` (world frame) from the center of mass.
    pub fn point_velocity(&self, r: &Vec3) -> Vec3 {
        self.velocity + self.angular_velocity.cross(r)
    }

    pub fn kinetic_energy(&self) -> f64 {
        if self.fixed {
            return 0.0;
        }
        let linear = 0.5 * self.mass * self.velocity.norm_squared();
        let angular = match self.inertia {
            Inertia::Planar(i) => 0.5 * i * self.angular_velocity.z * self.angular_velocity.z,
            Inertia::Spatial(d) => {
                let w = self.pose.dir_to_local(&self.angular_velocity);
                0.5 * (d.x * w.x * w.x + d.y * w.y * w.y + d.z * w.z * w.z)
            }
        };
        linear + angular
    }

    pub fn momentum(&self) -> Vec3 {
        if self.fixed {
            Vec3::zeros()
        } else {
            self.mass * self.velocity
        }
    }

    pub fn validate(&self) -> Result<()> {
        let inertia_ok = match self.inertia {
            Inertia::Planar(i) => i > 0.0 && i.is_finite(),
            Inertia::Spatial(d) => d.iter().all(|v| *v > 0.0 && v.is_finite()),
        };
        if !(self.mass > 0.0 && self.mass.is_finite() && inertia_ok) {
            return Err(Error::InvalidBody("mass and inertia must be positive and finite".into()));
        }
        if let Orientation::Spatial(q) = self.pose.orientation {
            if (q.into_inner().norm() - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidBody("orientation quaternion is not normalized".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn rotation_identity_and_quarter_turn() {
        assert_eq!(rotation_matrix(0.0), Matrix3::identity());
        let r = rotation_matrix(FRAC_PI_2);
        let expected = Matrix3::new(0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        assert_abs_diff_eq!(r, expected, epsilon = 1e-15);
        let rrt = rotation_matrix(0.37) * rotation_matrix(0.37).transpose();
        assert_abs_diff_eq!(rrt, Matrix3::identity(), epsilon = 1e-12);
    }

    #[test]
    fn relative_center_examples() {
        let q = relative_center(&Vec3::zeros(), 0.0, &Vec3::new(3.0, 1.0, 0.0));
        assert_eq!(q, Vec3::new(3.0, 1.0, 0.0));
        let q = relative_center(&Vec3::new(1.0, 0.0, 0.0), 0.0, &Vec3::new(3.0, 0.0, 0.0));
        assert_eq!(q, Vec3::new(2.0, 0.0, 0.0));
    }

    #[test]
    fn relative_center_quarter_turn_matches_independent_rotation() {
        // A body turned +90 degrees sees the world +x direction along its own -y.
        // Independent oracle: rotate the offset by -theta with the textbook
        // counter-clockwise formula.
        let theta = FRAC_PI_2;
        let d = (1.0, 0.0);
        let oracle = (
            d.0 * (-theta).cos() - d.1 * (-theta).sin(),
            d.0 * (-theta).sin() + d.1 * (-theta).cos(),
        );
        let q = relative_center(&Vec3::zeros(), theta, &Vec3::new(1.0, 0.0, 0.0));
        assert_abs_diff_eq!(q.x, oracle.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.y, oracle.1, epsilon = 1e-15);
        assert_abs_diff_eq!(q, Vec3::new(0.0, -1.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn rect_containment() {
        assert!(contains_point_rect(&Vec3::zeros(), 1.0, 1.0));
        assert!(contains_point_rect(&Vec3::new(1.0, 1.0, 0.0), 1.0, 1.0));
        assert!(contains_point_rect(&Vec3::new(-1.0, -1.0, 0.0), 1.0, 1.0));
        assert!(!contains_point_rect(&Vec3::new(1.01, 0.0, 0.0), 1.0, 1.0));
        assert!(!contains_point_rect(&Vec3::new(0.0, -1.01, 0.0), 1.0, 1.0));
    }

    #[test]
    fn circle_containment() {
        let c = Vec3::new(0.3, -0.2, 0.0);
        assert!(contains_point_circle(&c, &c, 0.5));
        assert!(contains_point_circle(&(c + Vec3::new(0.5, 0.0, 0.0)), &c, 0.5));
        assert!(!contains_point_circle(&(c + Vec3::new(0.5 + 1e-6, 0.0, 0.0)), &c, 0.5));
    }

    #[test]
    fn shape_validation() {
        assert!(Shape::Circle { radius: 1.0 }.validate().is_ok());
        assert!(Shape::Circle { radius: 0.0 }.validate().is_err());
        assert!(Shape::Rectangle { half_length: 1.0, half_width: -1.0 }.validate().is_err());
        assert!(Shape::Cuboid { half_extents: [1.0, 1.0, f64::NAN] }.validate().is_err());
    }

    #[test]
    fn planar_quaternion_matches_matrix() {
        let o = Orientation::Planar(0.7);
        let m = o.quaternion().to_rotation_matrix().into_inner();
        assert_abs_diff_eq!(m, o.world_from_body(), epsilon = 1e-14);
    }

    #[test]
    fn pose_round_trip() {
        let pose = Pose::planar(1.0, -2.0, 0.4);
        let p = Vec3::new(0.3, 0.8, 0.0);
        assert_abs_diff_eq!(pose.to_local(&pose.to_world(&p)), p, epsilon = 1e-14);
    }
}
