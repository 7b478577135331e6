//! Trajectory serialization.
//!
//! CSV: one row per (sample, body) with columns
//! `t,body_id,x,y,z,q0,q1,q2,q3,vx,vy,vz,wx,wy,wz`, quaternion scalar first;
//! contact events go to `<path>.events.csv` as `t,pair,phi,rho,Fn,Ft,saturated`.
//! JSON: a single document `{"samples": [...], "events": [...]}` using the
//! same field names.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::Trajectory;

pub const SAMPLE_COLUMNS: [&str; 15] =
    ["t", "body_id", "x", "y", "z", "q0", "q1", "q2", "q3", "vx", "vy", "vz", "wx", "wy", "wz"];
pub const EVENT_COLUMNS: [&str; 7] = ["t", "pair", "phi", "rho", "Fn", "Ft", "saturated"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format: {other}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub t: f64,
    pub body_id: usize,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
    pub wx: f64,
    pub wy: f64,
    pub wz: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventRow {
    pub t: f64,
    pub pair: String,
    pub phi: f64,
    pub rho: f64,
    #[serde(rename = "Fn")]
    pub f_n: f64,
    #[serde(rename = "Ft")]
    pub f_t: f64,
    pub saturated: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryTable {
    pub samples: Vec<SampleRow>,
    pub events: Vec<EventRow>,
}

impl From<&Trajectory> for TrajectoryTable {
    fn from(traj: &Trajectory) -> Self {
        let samples = traj
            .samples
            .iter()
            .flat_map(|s| {
                s.states.iter().enumerate().map(move |(id, st)| {
                    let q = st.pose.orientation.quaternion();
                    let (p, v, w) = (st.pose.position, st.velocity, st.angular_velocity);
                    SampleRow {
                        t: s.t,
                        body_id: id,
                        x: p.x,
                        y: p.y,
                        z: p.z,
                        q0: q.w,
                        q1: q.i,
                        q2: q.j,
                        q3: q.k,
                        vx: v.x,
                        vy: v.y,
                        vz: v.z,
                        wx: w.x,
                        wy: w.y,
                        wz: w.z,
                    }
                })
            })
            .collect();
        let events = traj
            .events
            .iter()
            .map(|e| EventRow {
                t: e.t,
                pair: format!("{}-{}", e.pair.0, e.pair.1),
                phi: e.phi,
                rho: e.rho,
                f_n: e.f_n,
                f_t: e.f_t,
                saturated: e.saturated,
            })
            .collect();
        TrajectoryTable { samples, events }
    }
}

/// Path of the contact-event sidecar written next to a CSV trajectory.
pub fn events_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".events.csv");
    PathBuf::from(s)
}

pub fn export_trajectory(traj: &Trajectory, format: Format, path: &Path) -> Result<()> {
    let table = TrajectoryTable::from(traj);
    match format {
        Format::Csv => {
            write_csv(path, &SAMPLE_COLUMNS, &table.samples)?;
            write_csv(&events_path(path), &EVENT_COLUMNS, &table.events)
        }
        Format::Json => {
            let file = File::create(path).map_err(|e| Error::io(path, e))?;
            let mut w = BufWriter::new(file);
            serde_json::to_writer(&mut w, &table).map_err(|e| Error::Format { path: path.into(), message: e.to_string() })?;
            w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
        }
    }
}

fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(BufWriter::new(file));
    let fail = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Format { path: path.into(), message: format!("{other:?}") },
    };
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.serialize(row).map_err(fail)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_json(path: &Path) -> Result<TrajectoryTable> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_reader(std::io::BufReader::new(file)).map_err(|e| Error::Format { path: path.into(), message: e.to_string() })
}

pub fn read_csv_samples(path: &Path) -> Result<Vec<SampleRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::Format { path: path.into(), message: e.to_string() })?;
    r.deserialize().collect::<std::result::Result<_, _>>().map_err(|e| Error::Format { path: path.into(), message: e.to_string() })
}
