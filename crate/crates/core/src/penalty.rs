//! Elastic-plastic penalty contact forces and their center-of-mass wrenches.
//!
//! ```text
//! F_N = kc·ρ³·(1 − cc·v_N)
//! F_T = −mu·F_N·(2 / (1 + exp(−v_T / vs)) − 1)
//! ```
//!
//! `v_N` is the relative velocity of B with respect to A along the A→B
//! normal, so approach is negative and raises the normal force.

use serde::{Deserialize, Serialize};

use crate::geometry::{BodyState, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MaterialParams {
    /// Contact stiffness, N/m³.
    pub kc: f64,
    /// Damping coefficient, s/m.
    pub cc: f64,
    /// Friction coefficient.
    pub mu: f64,
    /// Friction velocity scale, m/s.
    pub vs: f64,
}

impl Default for MaterialParams {
    fn default() -> Self {
        Self { kc: 1e5, cc: 0.2, mu: 0.3, vs: 0.01 }
    }
}

impl MaterialParams {
    pub fn validate(&self) -> crate::Result<()> {
        if self.kc > 0.0 && self.cc >= 0.0 && self.mu >= 0.0 && self.vs > 0.0 {
            Ok(())
        } else {
            Err(crate::Error::InvalidConfig(format!("invalid material parameters {self:?}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContactKinematics {
    pub v_n: f64,
    pub v_t: f64,
}

/// Force at the center of mass plus the equivalent moment.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BodyWrench {
    pub force: Vec3,
    /// Moment about the center of mass; planar bodies use only `z`.
    pub moment: Vec3,
}

impl std::ops::AddAssign for BodyWrench {
    fn add_assign(&mut self, rhs: Self) {
        self.force += rhs.force;
        self.moment += rhs.moment;
    }
}

/// Normal and tangential components of the contact-point relative velocity.
/// Anchors and directions are world-frame.
pub fn relative_velocity_at_contact(
    a: &BodyState,
    p_anchor: &Vec3,
    b: &BodyState,
    q_anchor: &Vec3,
    normal: &Vec3,
    tangent: &Vec3,
) -> ContactKinematics {
    let v_rel = b.point_velocity(q_anchor) - a.point_velocity(p_anchor);
    ContactKinematics { v_n: v_rel.dot(normal), v_t: v_rel.dot(tangent) }
}

pub fn contact_force(rho: f64, kin: &ContactKinematics, mat: &MaterialParams) -> (f64, f64) {
    // Scaling by kc before each factor of rho keeps round numbers exact
    // (kc = 1e5, rho = 0.01 gives 0.1, where rho.powi(3) is off by one ulp).
    let f_n = (mat.kc * rho * rho * rho * (1.0 - mat.cc * kin.v_n)).max(0.0);
    let f_t = -mat.mu * f_n * (2.0 / (1.0 + (-kin.v_t / mat.vs).exp()) - 1.0);
    (f_n, f_t)
}

/// Equal and opposite wrenches: B receives `+F`, A receives `−F`.
pub fn wrench_on_bodies(
    f_n: f64,
    f_t: f64,
    normal: &Vec3,
    tangent: &Vec3,
    p_anchor: &Vec3,
    q_anchor: &Vec3,
) -> (BodyWrench, BodyWrench) {
    let force = normal * f_n + tangent * f_t;
    let on_a = BodyWrench { force: -force, moment: p_anchor.cross(&-force) };
    let on_b = BodyWrench { force, moment: q_anchor.cross(&force) };
    (on_a, on_b)
}
