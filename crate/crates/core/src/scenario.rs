//! Scenario registry and JSON configuration overrides.
//!
//! Each scenario is a list of bodies plus a [`SimConfig`]. Defaults (not
//! given by any reference data, chosen here):
//!
//! | name              | bodies                                                        | gravity      |
//! |-------------------|---------------------------------------------------------------|--------------|
//! | `bouncing-circle` | static ground 6 × 1 m, circle R 0.5 m, 1 kg, dropped at 1.5 m/s from 0.5 m above | −9.81 ŷ |
//! | `circle-circle`   | two circles R 0.5 m, 1 kg, 1 m gap, head-on at ±1 m/s          | none         |
//! | `rect-circle`     | free 1 × 0.5 m rectangle, 2 kg; circle R 0.3 m, 0.5 kg at 1.5 m/s, 0.1 m off axis | none |
//! | `rect-rect`       | two 1 × 1 m squares, 1 kg, 1 m gap, head-on at ±1 m/s          | none         |
//! | `sphere-cuboid`   | static 4 × 4 × 1 m slab, sphere R 0.5 m, 1 kg dropped at 1.5 m/s from 0.5 m above | −9.81 ẑ |
//!
//! Overrides are JSON documents merged into the serialized scenario:
//! objects merge key by key, arrays merge element by element, and any other
//! value replaces the default.

use nalgebra::{Quaternion, UnitQuaternion};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{BodyState, Inertia, Orientation, Pose, Shape, Vec3};
use crate::sim::{SimConfig, Simulator, Trajectory};

pub const SCENARIO_NAMES: [&str; 5] = ["bouncing-circle", "circle-circle", "rect-circle", "rect-rect", "sphere-cuboid"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodySpec {
    pub shape: Shape,
    pub position: [f64; 3],
    /// Planar orientation angle, radians.
    #[serde(default)]
    pub angle: f64,
    /// Spatial orientation as `[w, i, j, k]`; identity when absent.
    #[serde(default)]
    pub quaternion: Option<[f64; 4]>,
    #[serde(default)]
    pub velocity: [f64; 3],
    #[serde(default)]
    pub angular_velocity: [f64; 3],
    pub mass: f64,
    #[serde(default)]
    pub fixed: bool,
}

impl BodySpec {
    fn new(shape: Shape, position: [f64; 3], velocity: [f64; 3], mass: f64) -> Self {
        Self { shape, position, angle: 0.0, quaternion: None, velocity, angular_velocity: [0.0; 3], mass, fixed: false }
    }

    fn fixed(mut self) -> Self {
        self.fixed = true;
        self
    }

    pub fn state(&self) -> Result<BodyState> {
        self.shape.validate()?;
        let position = Vec3::from(self.position);
        let orientation = if self.shape.is_planar() {
            if position.z != 0.0 || self.velocity[2] != 0.0 {
                return Err(Error::InvalidBody(format!("{} must lie in the z = 0 plane", self.shape.kind())));
            }
            Orientation::Planar(self.angle)
        } else {
            let [w, i, j, k] = self.quaternion.unwrap_or([1.0, 0.0, 0.0, 0.0]);
            Orientation::Spatial(UnitQuaternion::new_normalize(Quaternion::new(w, i, j, k)))
        };
        let mut angular_velocity = Vec3::from(self.angular_velocity);
        if self.shape.is_planar() {
            angular_velocity.x = 0.0;
            angular_velocity.y = 0.0;
        }
        let inertia: Inertia = self.shape.inertia(self.mass);
        let state = BodyState {
            pose: Pose { position, orientation },
            velocity: Vec3::from(self.velocity),
            angular_velocity,
            mass: self.mass,
            inertia,
            fixed: self.fixed,
        };
        state.validate()?;
        Ok(state)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub bodies: Vec<BodySpec>,
    pub config: SimConfig,
}

impl Scenario {
    /// Registry defaults for a named scenario.
    pub fn named(name: &str) -> Result<Self> {
        let g = 9.81;
        let (bodies, gravity) = match name {
            "bouncing-circle" => (
                vec![
                    BodySpec::new(Shape::Rectangle { half_length: 3.0, half_width: 0.5 }, [0.0; 3], [0.0; 3], 1.0).fixed(),
                    BodySpec::new(Shape::Circle { radius: 0.5 }, [0.0, 1.5, 0.0], [0.0, -1.5, 0.0], 1.0),
                ],
                [0.0, -g, 0.0],
            ),
            "circle-circle" => (
                vec![
                    BodySpec::new(Shape::Circle { radius: 0.5 }, [-1.0, 0.0, 0.0], [1.0, 0.0, 0.0], 1.0),
                    BodySpec::new(Shape::Circle { radius: 0.5 }, [1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], 1.0),
                ],
                [0.0; 3],
            ),
            "rect-circle" => (
                vec![
                    BodySpec::new(Shape::Rectangle { half_length: 0.5, half_width: 0.25 }, [0.0; 3], [0.0; 3], 2.0),
                    BodySpec::new(Shape::Circle { radius: 0.3 }, [1.3, 0.1, 0.0], [-1.5, 0.0, 0.0], 0.5),
                ],
                [0.0; 3],
            ),
            "rect-rect" => (
                vec![
                    BodySpec::new(Shape::Rectangle { half_length: 0.5, half_width: 0.5 }, [-1.0, 0.0, 0.0], [1.0, 0.0, 0.0], 1.0),
                    BodySpec::new(Shape::Rectangle { half_length: 0.5, half_width: 0.5 }, [1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], 1.0),
                ],
                [0.0; 3],
            ),
            "sphere-cuboid" => (
                vec![
                    BodySpec::new(Shape::Cuboid { half_extents: [2.0, 2.0, 0.5] }, [0.0; 3], [0.0; 3], 1.0).fixed(),
                    BodySpec::new(Shape::Sphere { radius: 0.5 }, [0.0, 0.0, 1.5], [0.0, 0.0, -1.5], 1.0),
                ],
                [0.0, 0.0, -g],
            ),
            other => return Err(Error::UnknownScenario(other.to_string())),
        };
        Ok(Self { name: name.to_string(), bodies, config: SimConfig { gravity, ..SimConfig::default() } })
    }

    /// Merge a JSON override document into this scenario.
    pub fn with_overrides(&self, overrides: &Value) -> Result<Self> {
        let mut base = serde_json::to_value(self).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        merge(&mut base, overrides);
        let merged: Scenario = serde_json::from_value(base).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        if merged.name != self.name {
            return Err(Error::InvalidConfig("scenario name cannot be overridden".into()));
        }
        Ok(merged)
    }

    pub fn simulator(&self) -> Result<Simulator> {
        let shapes = self.bodies.iter().map(|b| b.shape).collect();
        let states = self.bodies.iter().map(BodySpec::state).collect::<Result<Vec<_>>>()?;
        Simulator::new(shapes, states, self.config.clone())
    }

    pub fn run(&self) -> Result<Trajectory> {
        self.simulator()?.run()
    }
}

/// Registry bodies for `name`, simulated under `config`.
pub fn run_scenario(name: &str, config: &SimConfig) -> Result<Trajectory> {
    let mut scenario = Scenario::named(name)?;
    scenario.config = config.clone();
    scenario.run()
}

fn merge(base: &mut Value, patch: &Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        (Value::Array(b), Value::Array(p)) => {
            for (i, v) in p.iter().enumerate() {
                if i < b.len() {
                    merge(&mut b[i], v);
                } else {
                    b.push(v.clone());
                }
            }
        }
        (slot, v) => *slot = v.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn registry_has_every_name() {
        for name in SCENARIO_NAMES {
            let s = Scenario::named(name).unwrap();
            assert_eq!(s.name, name);
            assert!(s.simulator().is_ok(), "{name}");
        }
        assert!(matches!(Scenario::named("bogus"), Err(Error::UnknownScenario(_))));
    }

    #[test]
    fn initial_gaps_and_speeds() {
        use crate::detect::{detect, Backend};
        for name in SCENARIO_NAMES {
            let s = Scenario::named(name).unwrap();
            let sim = s.simulator().unwrap();
            let (st, sh) = (sim.states(), sim.shapes());
            let c = detect(Backend::Sat, &st[0].pose, &sh[0], &st[1].pose, &sh[1], &s.config.solver, None).unwrap();
            assert!(c.phi >= 0.5 - 1e-12, "{name}: gap {}", c.phi);
            let closing = (st[1].velocity - st[0].velocity).norm();
            assert!((1.0..=2.0).contains(&closing), "{name}: closing speed {closing}");
        }
    }

    #[test]
    fn overrides_merge() {
        let s = Scenario::named("circle-circle").unwrap();
        let o = json!({
            "config": { "dt": 1e-4, "material": { "cc": 0.0 } },
            "bodies": [ {}, { "velocity": [0.0, 0.0, 0.0] } ]
        });
        let m = s.with_overrides(&o).unwrap();
        assert_eq!(m.config.dt, 1e-4);
        assert_eq!(m.config.material.cc, 0.0);
        assert_eq!(m.config.material.kc, s.config.material.kc);
        assert_eq!(m.bodies[1].velocity, [0.0; 3]);
        assert_eq!(m.bodies[0], s.bodies[0]);
    }

    #[test]
    fn bad_overrides_are_rejected() {
        let s = Scenario::named("circle-circle").unwrap();
        assert!(s.with_overrides(&json!({ "config": { "dt": "fast" } })).is_err());
        assert!(s.with_overrides(&json!({ "name": "rect-rect" })).is_err());
        assert!(s.with_overrides(&json!({ "bodies": [ { "colour": 1 } ] })).is_err());
    }

    #[test]
    fn planar_bodies_must_stay_in_plane() {
        let mut b = BodySpec::new(Shape::Circle { radius: 1.0 }, [0.0, 0.0, 1.0], [0.0; 3], 1.0);
        assert!(b.state().is_err());
        b.position = [0.0; 3];
        assert!(b.state().is_ok());
    }
}
