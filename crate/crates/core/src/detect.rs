//! Backend selection and pair ordering for the narrow phase.

use serde::{Deserialize, Serialize};

use crate::contact::ContactInfo;
use crate::convex::{detect_convex, SolverSettings, WarmStart};
use crate::error::{Error, Result};
use crate::geometry::{Pose, Shape};
use crate::sat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Closed-form and separating-axis tests.
    Sat,
    /// Convex minimum-distance program.
    Co,
}

impl Backend {
    pub const ALL: [Backend; 2] = [Backend::Sat, Backend::Co];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Sat => "sat",
            Backend::Co => "co",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sat" => Ok(Backend::Sat),
            "co" => Ok(Backend::Co),
            other => Err(format!("unknown backend: {other}")),
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// How a shape pair maps onto a detector: `swap` means the detector expects
/// the bodies in the opposite order.
fn canonical(a: &Shape, b: &Shape) -> Option<bool> {
    use Shape::*;
    match (a, b) {
        (Rectangle { .. }, Circle { .. })
        | (Circle { .. }, Circle { .. })
        | (Rectangle { .. }, Rectangle { .. })
        | (Cuboid { .. }, Sphere { .. }) => Some(false),
        (Circle { .. }, Rectangle { .. }) | (Sphere { .. }, Cuboid { .. }) => Some(true),
        _ => None,
    }
}

pub fn is_supported(a: &Shape, b: &Shape) -> bool {
    canonical(a, b).is_some()
}

/// Run the chosen narrow phase for bodies A and B in either order.
///
/// The returned contact is always expressed with A as the first body.
pub fn detect(
    backend: Backend,
    pose_a: &Pose,
    shape_a: &Shape,
    pose_b: &Pose,
    shape_b: &Shape,
    settings: &SolverSettings,
    warm: Option<&mut WarmStart>,
) -> Result<ContactInfo> {
    let swap = canonical(shape_a, shape_b).ok_or(Error::UnsupportedPair(shape_a.kind(), shape_b.kind()))?;
    if swap {
        let info = detect_ordered(backend, pose_b, shape_b, pose_a, shape_a, settings, warm)?;
        Ok(info.swapped(pose_a))
    } else {
        detect_ordered(backend, pose_a, shape_a, pose_b, shape_b, settings, warm)
    }
}

fn detect_ordered(
    backend: Backend,
    pose_a: &Pose,
    shape_a: &Shape,
    pose_b: &Pose,
    shape_b: &Shape,
    settings: &SolverSettings,
    warm: Option<&mut WarmStart>,
) -> Result<ContactInfo> {
    match backend {
        Backend::Co => detect_convex(pose_a, shape_a, pose_b, shape_b, settings, warm),
        Backend::Sat => match (*shape_a, *shape_b) {
            (Shape::Rectangle { half_length, half_width }, Shape::Circle { radius }) => {
                Ok(sat::detect_rect_circle(pose_a, half_length, half_width, pose_b, radius))
            }
            (Shape::Circle { radius: ra }, Shape::Circle { radius: rb }) => {
                Ok(sat::detect_circle_circle(pose_a, ra, pose_b, rb))
            }
            (Shape::Rectangle { half_length: a1, half_width: a2 }, Shape::Rectangle { half_length: b1, half_width: b2 }) => {
                Ok(sat::detect_rect_rect(pose_a, (a1, a2), pose_b, (b1, b2)))
            }
            (Shape::Cuboid { half_extents }, Shape::Sphere { radius }) => {
                Ok(sat::detect_sphere_cuboid(pose_a, half_extents, pose_b, radius))
            }
            (a, b) => Err(Error::UnsupportedPair(a.kind(), b.kind())),
        },
    }
}
