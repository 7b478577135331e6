//! The hand-off record between narrow-phase detection and force resolution.

use serde::{Deserialize, Serialize};

use crate::geometry::{Pose, Vec3};

/// Detection output for one body pair.
///
/// Local quantities are expressed in the frame of body A with origin at its
/// center of mass; `world` carries the same anchors and directions rotated
/// into the inertial frame for the resolver. The normal points from A to B.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactInfo {
    /// Proximity: separation between the minimum-distance points, negative on overlap.
    pub phi: f64,
    /// Interpenetration depth, zero when disjoint.
    pub rho: f64,
    pub colliding: bool,
    /// False when `phi` is only a bound (separated rectangle pairs, eroded rectangles).
    pub phi_exact: bool,
    /// Penetration exceeded the range the convex backend can measure.
    pub saturated: bool,
    /// Minimum-distance point on A.
    pub p_tilde: Vec3,
    /// Minimum-distance point on B.
    pub q_tilde: Vec3,
    /// Contact point on A relative to A's center.
    pub p_anchor: Vec3,
    /// Contact point on B relative to B's center.
    pub q_anchor: Vec3,
    pub normal: Vec3,
    pub tangent: Vec3,
    pub world: WorldContact,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorldContact {
    pub point_a: Vec3,
    pub point_b: Vec3,
    pub p_anchor: Vec3,
    pub q_anchor: Vec3,
    pub normal: Vec3,
    pub tangent: Vec3,
}

/// Frame-A quantities produced by a detector before they are lifted to the world.
#[derive(Clone, Copy, Debug)]
pub(crate) struct LocalContact {
    pub phi: f64,
    pub rho: f64,
    pub phi_exact: bool,
    pub saturated: bool,
    pub p_tilde: Vec3,
    pub q_tilde: Vec3,
    pub p_anchor: Vec3,
    pub q_anchor: Vec3,
    pub normal: Vec3,
    pub tangent: Vec3,
}

impl LocalContact {
    pub fn into_contact(self, pose_a: &Pose) -> ContactInfo {
        ContactInfo {
            phi: self.phi,
            rho: self.rho,
            colliding: self.rho > 0.0,
            phi_exact: self.phi_exact,
            saturated: self.saturated,
            p_tilde: self.p_tilde,
            q_tilde: self.q_tilde,
            p_anchor: self.p_anchor,
            q_anchor: self.q_anchor,
            normal: self.normal,
            tangent: self.tangent,
            world: WorldContact {
                point_a: pose_a.to_world(&self.p_tilde),
                point_b: pose_a.to_world(&self.q_tilde),
                p_anchor: pose_a.dir_to_world(&self.p_anchor),
                q_anchor: pose_a.dir_to_world(&self.q_anchor),
                normal: pose_a.dir_to_world(&self.normal),
                tangent: pose_a.dir_to_world(&self.tangent),
            },
        }
    }
}

impl ContactInfo {
    /// The same contact seen with the bodies' roles exchanged; `pose_b` is the
    /// pose of the body that becomes the new A.
    pub fn swapped(&self, pose_b: &Pose) -> ContactInfo {
        let w = &self.world;
        let world = WorldContact {
            point_a: w.point_b,
            point_b: w.point_a,
            p_anchor: w.q_anchor,
            q_anchor: w.p_anchor,
            normal: -w.normal,
            tangent: -w.tangent,
        };
        ContactInfo {
            phi: self.phi,
            rho: self.rho,
            colliding: self.colliding,
            phi_exact: self.phi_exact,
            saturated: self.saturated,
            p_tilde: pose_b.to_local(&world.point_a),
            q_tilde: pose_b.to_local(&world.point_b),
            p_anchor: pose_b.dir_to_local(&world.p_anchor),
            q_anchor: pose_b.dir_to_local(&world.q_anchor),
            normal: pose_b.dir_to_local(&world.normal),
            tangent: pose_b.dir_to_local(&world.tangent),
            world,
        }
    }
}

/// In-plane tangent `e3 × n`.
pub fn planar_tangent(n: &Vec3) -> Vec3 {
    Vec3::new(-n.y, n.x, 0.0)
}

/// `e3 × n`, falling back to `e1 × n` when the normal is along `e3`.
pub fn spatial_tangent(n: &Vec3) -> Vec3 {
    let t = Vec3::z().cross(n);
    if t.norm() > 1e-6 {
        return t.normalize();
    }
    Vec3::x().cross(n).normalize()
}
