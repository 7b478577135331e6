//! Data-parallel helpers. With the `parallel` feature (default) these fan
//! out over rayon's pool; without it they run sequentially. Output order
//! always matches input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::contact::ContactInfo;
use crate::convex::SolverSettings;
use crate::detect::{self, Backend};
use crate::error::Result;
use crate::geometry::{Pose, Shape};
use crate::scenario::Scenario;
use crate::sim::Trajectory;

/// Order-preserving map over a slice.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Order-preserving map over `0..n`.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Map over `items` paired with exclusive access to the matching `state` slot.
pub(crate) fn zip_map_mut<T, S, R, F>(items: &[T], state: &mut [S], f: F) -> Vec<R>
where
    T: Sync,
    S: Send,
    R: Send,
    F: Fn(&T, &mut S) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().zip(state.par_iter_mut()).map(|(t, s)| f(t, s)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().zip(state.iter_mut()).map(|(t, s)| f(t, s)).collect()
    }
}

/// One narrow-phase query.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairQuery {
    pub pose_a: Pose,
    pub shape_a: Shape,
    pub pose_b: Pose,
    pub shape_b: Shape,
}

impl PairQuery {
    pub fn run(&self, backend: Backend, settings: &SolverSettings) -> Result<ContactInfo> {
        detect::detect(backend, &self.pose_a, &self.shape_a, &self.pose_b, &self.shape_b, settings, None)
    }
}

/// Cold-started detection over a batch of independent queries.
pub fn detect_batch(backend: Backend, queries: &[PairQuery], settings: &SolverSettings) -> Vec<Result<ContactInfo>> {
    map(queries, |q| q.run(backend, settings))
}

/// Sequential reference for [`detect_batch`].
pub fn detect_batch_sequential(
    backend: Backend,
    queries: &[PairQuery],
    settings: &SolverSettings,
) -> Vec<Result<ContactInfo>> {
    queries.iter().map(|q| q.run(backend, settings)).collect()
}

/// Run independent scenarios, one stepping context each.
pub fn run_many(scenarios: &[Scenario]) -> Vec<Result<Trajectory>> {
    map(scenarios, Scenario::run)
}
