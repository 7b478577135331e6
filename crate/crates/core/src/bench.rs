//! Timing harness: whole-scenario wall time per backend, plus per-call
//! narrow-phase cost on each shape pairing.

use std::hint::black_box;
use std::time::Instant;

use nalgebra::UnitQuaternion;
use serde::{Deserialize, Serialize};

use crate::batch::PairQuery;
use crate::convex::SolverSettings;
use crate::detect::Backend;
use crate::error::Result;
use crate::geometry::{Pose, Shape, Vec3};
use crate::scenario::Scenario;

pub const PAIRINGS: [&str; 4] = ["rect-circle", "circle-circle", "rect-rect", "sphere-cuboid"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub scenario: String,
    pub backend: Backend,
    pub mean_s: f64,
    pub std_s: f64,
    pub repeat: usize,
    pub steps: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NarrowPhaseRow {
    pub pairing: String,
    pub backend: Backend,
    pub calls: usize,
    pub total_s: f64,
    pub per_call_ns: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub os: String,
    pub arch: String,
    pub logical_cpus: usize,
    pub parallel_feature: bool,
    pub note: String,
}

impl Environment {
    pub fn current() -> Self {
        Self {
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
            logical_cpus: std::thread::available_parallelism().map_or(1, |n| n.get()),
            parallel_feature: cfg!(feature = "parallel"),
            note: "wall times are machine-specific; compare backends within one report only".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub environment: Environment,
    pub repeat: usize,
    pub rows: Vec<CellReport>,
    pub narrow_phase: Vec<NarrowPhaseRow>,
    /// Per-call CO cost over SAT cost on the sphere–cuboid pairing.
    pub sphere_cuboid_co_over_sat: Option<f64>,
    /// Whether CO was no slower than SAT on sphere–cuboid (informational).
    pub sphere_cuboid_co_not_slower: Option<bool>,
}

impl BenchReport {
    pub fn new(repeat: usize, rows: Vec<CellReport>, narrow_phase: Vec<NarrowPhaseRow>) -> Self {
        let per_call = |backend| {
            narrow_phase
                .iter()
                .find(|r| r.pairing == "sphere-cuboid" && r.backend == backend && r.error.is_none())
                .map(|r| r.per_call_ns)
        };
        let ratio = match (per_call(Backend::Co), per_call(Backend::Sat)) {
            (Some(co), Some(sat)) if sat > 0.0 => Some(co / sat),
            _ => None,
        };
        Self {
            environment: Environment::current(),
            repeat,
            rows,
            narrow_phase,
            sphere_cuboid_co_over_sat: ratio,
            sphere_cuboid_co_not_slower: ratio.map(|r| r <= 1.0),
        }
    }
}

fn mean_std(times: &[f64]) -> (f64, f64) {
    let n = times.len() as f64;
    let mean = times.iter().sum::<f64>() / n;
    if times.len() < 2 {
        return (mean, 0.0);
    }
    let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Time the stepping loop of `scenario` under `backend`: one discarded
/// warm-up run, then `repeat` measured runs. Setup is outside the clock.
pub fn time_cell(scenario: &Scenario, backend: Backend, repeat: usize) -> CellReport {
    let mut s = scenario.clone();
    s.config.backend = backend;
    let steps = s.config.steps();
    let measured = || -> Result<Vec<f64>> {
        s.simulator()?.run_silent()?;
        let mut times = Vec::with_capacity(repeat);
        for _ in 0..repeat.max(1) {
            let mut sim = s.simulator()?;
            let start = Instant::now();
            sim.run_silent()?;
            times.push(start.elapsed().as_secs_f64());
        }
        Ok(times)
    };
    match measured() {
        Ok(times) => {
            let (mean_s, std_s) = mean_std(&times);
            CellReport { scenario: s.name.clone(), backend, mean_s, std_s, repeat: times.len(), steps, error: None }
        }
        Err(e) => CellReport {
            scenario: s.name.clone(),
            backend,
            mean_s: f64::NAN,
            std_s: f64::NAN,
            repeat: 0,
            steps,
            error: Some(e.to_string()),
        },
    }
}

/// Low-discrepancy sample in [0, 1) for query `k`, coordinate `dim`.
fn weyl(k: usize, dim: usize, seed: u64) -> f64 {
    const ALPHAS: [f64; 6] = [
        0.618_033_988_749_894_9,
        0.414_213_562_373_095_1,
        0.732_050_807_568_877_2,
        0.236_067_977_499_789_7,
        0.645_751_311_064_590_6,
        0.162_277_660_168_379_5,
    ];
    let x = (seed as f64) * 0.5 + (k as f64 + 1.0) * ALPHAS[dim % ALPHAS.len()];
    x - x.floor()
}

/// Near-contact queries for one pairing: a mix of separated, touching and
/// overlapping poses.
pub fn pairing_queries(pairing: &str, count: usize, seed: u64) -> Option<Vec<PairQuery>> {
    use std::f64::consts::TAU;
    let id = UnitQuaternion::identity();
    let make = |k: usize| -> PairQuery {
        let u = |d| weyl(k, d, seed);
        match pairing {
            "rect-circle" => {
                let (r, psi) = (0.45 + 0.6 * u(0), TAU * u(1));
                PairQuery {
                    pose_a: Pose::planar(0.0, 0.0, TAU * u(2)),
                    shape_a: Shape::Rectangle { half_length: 0.5, half_width: 0.25 },
                    pose_b: Pose::planar(r * psi.cos(), r * psi.sin(), 0.0),
                    shape_b: Shape::Circle { radius: 0.3 },
                }
            }
            "circle-circle" => {
                let (r, psi) = (0.6 + 0.8 * u(0), TAU * u(1));
                PairQuery {
                    pose_a: Pose::planar(0.0, 0.0, 0.0),
                    shape_a: Shape::Circle { radius: 0.5 },
                    pose_b: Pose::planar(r * psi.cos(), r * psi.sin(), 0.0),
                    shape_b: Shape::Circle { radius: 0.5 },
                }
            }
            "rect-rect" => {
                let (r, psi) = (0.8 + 0.8 * u(0), TAU * u(1));
                PairQuery {
                    pose_a: Pose::planar(0.0, 0.0, TAU * u(2)),
                    shape_a: Shape::Rectangle { half_length: 0.5, half_width: 0.5 },
                    pose_b: Pose::planar(r * psi.cos(), r * psi.sin(), TAU * u(3)),
                    shape_b: Shape::Rectangle { half_length: 0.5, half_width: 0.5 },
                }
            }
            _ => PairQuery {
                pose_a: Pose::spatial(Vec3::zeros(), id),
                shape_a: Shape::Cuboid { half_extents: [2.0, 2.0, 0.5] },
                pose_b: Pose::spatial(Vec3::new(5.0 * u(0) - 2.5, 5.0 * u(1) - 2.5, 0.8 + 0.6 * u(2)), id),
                shape_b: Shape::Sphere { radius: 0.5 },
            },
        }
    };
    PAIRINGS.contains(&pairing).then(|| (0..count).map(make).collect())
}

/// Time `calls` cold-started detections cycling over a fixed query set.
pub fn time_narrow_phase(pairing: &str, backend: Backend, calls: usize, settings: &SolverSettings) -> NarrowPhaseRow {
    let row = |total_s: f64, error: Option<String>| NarrowPhaseRow {
        pairing: pairing.to_string(),
        backend,
        calls,
        total_s,
        per_call_ns: total_s * 1e9 / calls.max(1) as f64,
        error,
    };
    let Some(queries) = pairing_queries(pairing, 1024, 0) else {
        return row(f64::NAN, Some(format!("unknown pairing: {pairing}")));
    };
    // Validate once outside the clock so errors are reported, not timed.
    if let Some(Err(e)) = queries.iter().map(|q| q.run(backend, settings)).find(|r| r.is_err()) {
        return row(f64::NAN, Some(e.to_string()));
    }
    let start = Instant::now();
    for k in 0..calls {
        let _ = black_box(black_box(&queries[k % queries.len()]).run(backend, settings));
    }
    row(start.elapsed().as_secs_f64(), None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats() {
        assert_eq!(mean_std(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn queries_cover_every_pairing() {
        for p in PAIRINGS {
            let qs = pairing_queries(p, 64, 0).unwrap();
            let colliding = qs
                .iter()
                .filter(|q| q.run(Backend::Sat, &SolverSettings::default()).unwrap().colliding)
                .count();
            assert!(colliding > 0 && colliding < qs.len(), "{p}: {colliding}");
        }
        assert!(pairing_queries("cone-cone", 1, 0).is_none());
    }

    #[test]
    fn cell_reports_time() {
        let mut s = Scenario::named("circle-circle").unwrap();
        s.config.duration = 0.01;
        let c = time_cell(&s, Backend::Co, 2);
        assert!(c.error.is_none());
        assert_eq!(c.repeat, 2);
        assert!(c.mean_s > 0.0);
    }
}
