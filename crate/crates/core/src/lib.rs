//! Rigid-body contact dynamics with two interchangeable narrow phases.
//!
//! * [`sat`]: closed-form region tests and separating-axis checks.
//! * [`convex`]: minimum distance to a shrunk copy of the second body,
//!   solved by alternating projections, with interpenetration recovered from
//!   the shrink margin.
//!
//! Both produce a [`ContactInfo`], which [`penalty`] turns into equal and
//! opposite wrenches and [`sim`] integrates with semi-implicit Euler.

pub mod batch;
pub mod bench;
pub mod contact;
pub mod convex;
pub mod detect;
pub mod error;
pub mod export;
pub mod geometry;
pub mod penalty;
pub mod plot;
pub mod sat;
pub mod scenario;
pub mod sim;

pub use contact::ContactInfo;
pub use convex::SolverSettings;
pub use detect::{detect, Backend};
pub use error::{Error, Result};
pub use geometry::{BodyState, Pose, Shape, Vec3};
pub use penalty::MaterialParams;
pub use scenario::{run_scenario, Scenario, SCENARIO_NAMES};
pub use sim::{SimConfig, Simulator, Trajectory};
