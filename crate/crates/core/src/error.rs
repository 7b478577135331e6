use std::path::PathBuf;

use thiserror::Error;

use crate::geometry::Shape;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("circle center lies on the rectangle boundary")]
    DegenerateCenter,
    #[error("circle centers coincide")]
    ConcentricDegenerate,
    #[error("minimum-distance points coincide; direction undefined")]
    DegenerateDirection,
    #[error("alternating projections did not converge after {iterations} iterations")]
    NotConverged { iterations: usize },
    #[error("unsupported shape pairing: {0} vs {1}")]
    UnsupportedPair(&'static str, &'static str),
    #[error("unknown scenario: {0}")]
    UnknownScenario(String),
    #[error("invalid shape: {0:?}")]
    InvalidShape(Shape),
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("invalid settings: {0}")]
    InvalidSettings(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("plotting is only supported for planar trajectories")]
    Unsupported3D,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
