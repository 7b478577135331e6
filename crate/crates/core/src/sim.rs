//! Fixed-step simulation loop: detection, penalty resolution, then a
//! semi-implicit Euler update of every free body.

use nalgebra::{Quaternion, UnitQuaternion};
use serde::{Deserialize, Serialize};

use crate::batch;
use crate::contact::ContactInfo;
use crate::convex::{SolverSettings, WarmStart};
use crate::detect::{self, Backend};
use crate::error::{Error, Result};
use crate::geometry::{BodyState, Inertia, Orientation, Shape, Vec3};
use crate::penalty::{self, BodyWrench, MaterialParams};

/// Pair counts at or above this are detected in parallel.
const PARALLEL_PAIR_THRESHOLD: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairMaterial {
    pub pair: [usize; 2],
    pub material: MaterialParams,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub dt: f64,
    pub duration: f64,
    pub backend: Backend,
    pub gravity: [f64; 3],
    pub solver: SolverSettings,
    /// Material used by every pair without an explicit override.
    pub material: MaterialParams,
    pub pair_materials: Vec<PairMaterial>,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            duration: 2.0,
            backend: Backend::Sat,
            gravity: [0.0; 3],
            solver: SolverSettings::default(),
            material: MaterialParams::default(),
            pair_materials: Vec::new(),
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.duration >= self.dt && self.duration.is_finite()) {
            return Err(Error::InvalidConfig(format!("duration {} must be at least dt {}", self.duration, self.dt)));
        }
        self.solver.validate()?;
        self.material.validate()?;
        for pm in &self.pair_materials {
            pm.material.validate()?;
        }
        Ok(())
    }

    pub fn material_for(&self, i: usize, j: usize) -> &MaterialParams {
        self.pair_materials
            .iter()
            .find(|pm| (pm.pair[0] == i && pm.pair[1] == j) || (pm.pair[0] == j && pm.pair[1] == i))
            .map_or(&self.material, |pm| &pm.material)
    }

    pub fn steps(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }
}

/// Detection and resolution outcome for one body pair.
#[derive(Clone, Copy, Debug)]
pub struct PairContact {
    pub pair: (usize, usize),
    pub info: ContactInfo,
    pub f_n: f64,
    pub f_t: f64,
}

#[derive(Clone, Debug, Default)]
pub struct Response {
    /// Net wrench per body, indexed like the input states.
    pub wrenches: Vec<BodyWrench>,
    /// Every tested pair, colliding or not.
    pub contacts: Vec<PairContact>,
}

/// Per-pair warm-start storage for the convex backend.
#[derive(Clone, Debug, Default)]
pub struct ContactCache {
    entries: Vec<WarmStart>,
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Detect every body pair, resolve colliding ones with the penalty law and
/// accumulate the resulting wrenches. Accumulation follows pair order, so the
/// result does not depend on whether detection ran in parallel.
pub fn collision_response(
    states: &[BodyState],
    shapes: &[Shape],
    config: &SimConfig,
    cache: &mut ContactCache,
) -> Result<Response> {
    let pairs = pairs(states.len());
    cache.entries.resize(pairs.len(), WarmStart::default());

    let resolve = |&(i, j): &(usize, usize), warm: &mut WarmStart| -> Result<PairContact> {
        let (a, b) = (&states[i], &states[j]);
        let info = detect::detect(config.backend, &a.pose, &shapes[i], &b.pose, &shapes[j], &config.solver, Some(warm))?;
        if !info.colliding {
            return Ok(PairContact { pair: (i, j), info, f_n: 0.0, f_t: 0.0 });
        }
        let info = orient_tangent(a, b, info, !shapes[i].is_planar());
        let w = &info.world;
        let kin = penalty::relative_velocity_at_contact(a, &w.p_anchor, b, &w.q_anchor, &w.normal, &w.tangent);
        let (f_n, f_t) = penalty::contact_force(info.rho, &kin, config.material_for(i, j));
        Ok(PairContact { pair: (i, j), info, f_n, f_t })
    };

    let results: Vec<Result<PairContact>> = if pairs.len() >= PARALLEL_PAIR_THRESHOLD {
        batch::zip_map_mut(&pairs, &mut cache.entries, resolve)
    } else {
        pairs.iter().zip(cache.entries.iter_mut()).map(|(p, w)| resolve(p, w)).collect()
    };

    let mut response = Response { wrenches: vec![BodyWrench::default(); states.len()], contacts: Vec::new() };
    for result in results {
        let contact = result?;
        if contact.info.colliding {
            let w = &contact.info.world;
            let (on_a, on_b) =
                penalty::wrench_on_bodies(contact.f_n, contact.f_t, &w.normal, &w.tangent, &w.p_anchor, &w.q_anchor);
            response.wrenches[contact.pair.0] += on_a;
            response.wrenches[contact.pair.1] += on_b;
        }
        response.contacts.push(contact);
    }
    Ok(response)
}

/// For spatial pairs the friction direction follows the tangential slip;
/// a fixed in-plane tangent would leave the orthogonal slip undamped.
fn orient_tangent(a: &BodyState, b: &BodyState, mut info: ContactInfo, spatial: bool) -> ContactInfo {
    if !spatial {
        return info;
    }
    let w = &info.world;
    let v_rel = b.point_velocity(&w.q_anchor) - a.point_velocity(&w.p_anchor);
    let slip = v_rel - w.normal * v_rel.dot(&w.normal);
    let speed = slip.norm();
    if speed > 1e-12 {
        let t = slip / speed;
        info.world.tangent = t;
        info.tangent = a.pose.dir_to_local(&t);
    }
    info
}

/// Semi-implicit Euler: velocities first, then poses from the new velocities.
pub fn step(states: &mut [BodyState], wrenches: &[BodyWrench], gravity: &Vec3, dt: f64) {
    for (s, w) in states.iter_mut().zip(wrenches) {
        if s.fixed {
            continue;
        }
        s.velocity += (w.force / s.mass + gravity) * dt;
        match (s.inertia, s.pose.orientation) {
            (Inertia::Planar(i), Orientation::Planar(theta)) => {
                s.angular_velocity = Vec3::new(0.0, 0.0, s.angular_velocity.z + dt * w.moment.z / i);
                s.pose.orientation = Orientation::Planar(theta + dt * s.angular_velocity.z);
            }
            (Inertia::Spatial(d), Orientation::Spatial(q)) => {
                let to_world = q.to_rotation_matrix();
                let wb = to_world.inverse() * s.angular_velocity;
                let mb = to_world.inverse() * w.moment;
                let iw = Vec3::new(d.x * wb.x, d.y * wb.y, d.z * wb.z);
                let rhs = mb - wb.cross(&iw);
                let dwb = Vec3::new(rhs.x / d.x, rhs.y / d.y, rhs.z / d.z);
                s.angular_velocity += to_world * (dwb * dt);
                let omega = Quaternion::from_parts(0.0, s.angular_velocity);
                let q_next = q.into_inner() + omega * q.into_inner() * (0.5 * dt);
                s.pose.orientation = Orientation::Spatial(UnitQuaternion::new_normalize(q_next));
            }
            // Mismatched inertia/orientation kinds are rejected when bodies are built.
            _ => {}
        }
        s.pose.position += s.velocity * dt;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactEvent {
    pub t: f64,
    pub pair: (usize, usize),
    pub phi: f64,
    pub rho: f64,
    pub f_n: f64,
    pub f_t: f64,
    pub saturated: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub states: Vec<BodyState>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub shapes: Vec<Shape>,
    pub samples: Vec<Sample>,
    pub events: Vec<ContactEvent>,
}

impl Trajectory {
    pub fn is_planar(&self) -> bool {
        self.shapes.iter().all(Shape::is_planar)
    }
}

/// One stepping context: owns body states, warm-start caches and the clock.
#[derive(Clone, Debug)]
pub struct Simulator {
    shapes: Vec<Shape>,
    states: Vec<BodyState>,
    config: SimConfig,
    cache: ContactCache,
    gravity: Vec3,
    step_index: usize,
}

impl Simulator {
    pub fn new(shapes: Vec<Shape>, states: Vec<BodyState>, config: SimConfig) -> Result<Self> {
        config.validate()?;
        if shapes.len() != states.len() {
            return Err(Error::InvalidConfig("one shape per body required".into()));
        }
        for (shape, state) in shapes.iter().zip(&states) {
            shape.validate()?;
            state.validate()?;
            let consistent = matches!(
                (shape.is_planar(), state.pose.orientation, state.inertia),
                (true, Orientation::Planar(_), Inertia::Planar(_)) | (false, Orientation::Spatial(_), Inertia::Spatial(_))
            );
            if !consistent {
                return Err(Error::InvalidBody(format!("{} needs matching orientation and inertia kinds", shape.kind())));
            }
        }
        for (i, j) in pairs(shapes.len()) {
            if !detect::is_supported(&shapes[i], &shapes[j]) {
                return Err(Error::UnsupportedPair(shapes[i].kind(), shapes[j].kind()));
            }
        }
        let gravity = Vec3::from(config.gravity);
        Ok(Self { shapes, states, config, cache: ContactCache::default(), gravity, step_index: 0 })
    }

    pub fn states(&self) -> &[BodyState] {
        &self.states
    }

    pub fn shapes(&self) -> &[Shape] {
        &self.shapes
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn time(&self) -> f64 {
        self.step_index as f64 * self.config.dt
    }

    /// Advance one step and return the contacts that produced forces.
    pub fn advance(&mut self) -> Result<Vec<PairContact>> {
        let response = collision_response(&self.states, &self.shapes, &self.config, &mut self.cache)?;
        step(&mut self.states, &response.wrenches, &self.gravity, self.config.dt);
        self.step_index += 1;
        Ok(response.contacts.into_iter().filter(|c| c.info.colliding).collect())
    }

    /// Step for the configured duration without recording anything.
    pub fn run_silent(&mut self) -> Result<()> {
        for _ in 0..self.config.steps() {
            self.advance()?;
        }
        Ok(())
    }

    /// Step for the configured duration, sampling every step.
    pub fn run(mut self) -> Result<Trajectory> {
        let steps = self.config.steps();
        let mut samples = Vec::with_capacity(steps + 1);
        let mut events = Vec::new();
        let mut warned = false;
        samples.push(Sample { t: 0.0, states: self.states.clone() });
        for _ in 0..steps {
            let t = self.time();
            for c in self.advance()? {
                if c.info.saturated && !warned {
                    log::warn!("pair {:?} penetrated past the shrink margin at t = {t}; depth is clamped", c.pair);
                    warned = true;
                }
                events.push(ContactEvent {
                    t,
                    pair: c.pair,
                    phi: c.info.phi,
                    rho: c.info.rho,
                    f_n: c.f_n,
                    f_t: c.f_t,
                    saturated: c.info.saturated,
                });
            }
            samples.push(Sample { t: self.time(), states: self.states.clone() });
        }
        Ok(Trajectory { shapes: self.shapes, samples, events })
    }
}

pub fn kinetic_energy(states: &[BodyState]) -> f64 {
    states.iter().map(BodyState::kinetic_energy).sum()
}

pub fn linear_momentum(states: &[BodyState]) -> Vec3 {
    states.iter().map(BodyState::momentum).sum()
}

/// Kinetic plus gravitational potential energy of the free bodies.
pub fn mechanical_energy(states: &[BodyState], gravity: &Vec3) -> f64 {
    kinetic_energy(states)
        - states.iter().filter(|s| !s.fixed).map(|s| s.mass * gravity.dot(&s.pose.position)).sum::<f64>()
}
