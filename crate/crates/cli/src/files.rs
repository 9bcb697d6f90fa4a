//! Profile, trajectory and summary files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tallest_column::reconstruct::ProfileSample;
use tallest_column::{BoundaryKind, ColumnProfile, Solution};

use crate::{Failure, Format};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub s: f64,
    pub a: f64,
    pub b: f64,
    pub theta: f64,
    /// 1 where the similarity solution extends the trajectory toward the tip.
    pub extended: u8,
}

impl From<&ProfileSample> for ProfileRow {
    fn from(p: &ProfileSample) -> Self {
        Self { s: p.s, a: p.a, b: p.b, theta: p.theta, extended: p.extended as u8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub tau: f64,
    pub w: f64,
    pub beta: f64,
    pub alpha: f64,
}

pub fn trajectory_rows(sol: &Solution) -> Vec<TrajectoryRow> {
    sol.trajectory
        .iter()
        .map(|p| TrajectoryRow { t: p.t, tau: p.state.tau, w: p.state.w, beta: p.state.beta, alpha: p.state.alpha })
        .collect()
}

/// Everything in one document for `--format json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonProfile {
    pub bc: BoundaryKind,
    pub lambda: f64,
    pub profile: Vec<ProfileRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trajectory: Vec<TrajectoryRow>,
}

/// Run metadata written next to every solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub bc: BoundaryKind,
    pub lambda: f64,
    pub delta: f64,
    pub t_stop: f64,
    pub volume: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_span: f64,
    pub event_tol: f64,
    pub max_step: f64,
    pub points: usize,
    pub s_floor: f64,
    pub format: Format,
    pub profile: String,
    pub trajectory: Option<String>,
    pub version: String,
}

/// `dir/name.csv` → `dir/name.<suffix>`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

pub fn file_name(path: &Path) -> String {
    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), Failure> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| io_err(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, Failure> {
    let mut r = csv::Reader::from_path(path).map_err(|e| io_err(path, e))?;
    r.deserialize().collect::<Result<Vec<T>, _>>().map_err(|e| io_err(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| io_err(path, e))?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| io_err(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    serde_json::from_reader(std::io::BufReader::new(file)).map_err(|e| io_err(path, e))
}

/// Load a profile written by `solve`, in either format.
pub fn read_profile(path: &Path, bc: BoundaryKind, lambda: f64) -> Result<ColumnProfile, Failure> {
    let rows: Vec<ProfileRow> = match Format::from_path(path) {
        Format::Json => read_json::<JsonProfile>(path)?.profile,
        Format::Csv => read_csv(path)?,
    };
    let samples = rows
        .iter()
        .map(|r| ProfileSample { s: r.s, a: r.a, b: r.b, theta: r.theta, theta_s: f64::NAN, extended: r.extended != 0 })
        .collect();
    ColumnProfile::from_samples(bc, lambda, samples).map_err(|e| io_err(path, e))
}
