//! CSV emission and parse-back.
//!
//! All files are UTF-8, comma separated, `\n` terminated, with a fixed header
//! row. Floats are written in shortest round-trip form, so reading a file back
//! yields bit-identical values. Missing values (failed solves, the all-class
//! summary row) are empty fields.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::sweep::SummaryRow;
use super::{Algorithm, TargetClass, TrialRecord};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::solver::Trajectory;

pub const RECORD_HEADER: [&str; 17] = [
    "trial_id",
    "sigma_db",
    "algorithm",
    "class",
    "true_x",
    "true_y",
    "initial_x",
    "initial_y",
    "step",
    "estimate_x",
    "estimate_y",
    "sq_error",
    "iterations",
    "converged",
    "spurious",
    "seed",
    "failure",
];

pub const SUMMARY_HEADER: [&str; 5] = ["sigma_db", "algorithm", "class", "mean_sq_error", "trial_count"];

pub const TRAJECTORY_HEADER: [&str; 3] = ["iteration", "x", "y"];

#[derive(Debug, Serialize, Deserialize)]
struct RecordRow {
    trial_id: u64,
    sigma_db: f64,
    algorithm: Algorithm,
    class: TargetClass,
    true_x: f64,
    true_y: f64,
    initial_x: f64,
    initial_y: f64,
    step: f64,
    estimate_x: Option<f64>,
    estimate_y: Option<f64>,
    sq_error: Option<f64>,
    iterations: usize,
    converged: bool,
    spurious: bool,
    seed: u64,
    failure: Option<String>,
}

impl From<&TrialRecord> for RecordRow {
    fn from(r: &TrialRecord) -> Self {
        Self {
            trial_id: r.trial_id,
            sigma_db: r.sigma_db,
            algorithm: r.algorithm,
            class: r.class,
            true_x: r.true_source.x,
            true_y: r.true_source.y,
            initial_x: r.initial.x,
            initial_y: r.initial.y,
            step: r.step,
            estimate_x: r.estimate.map(|p| p.x),
            estimate_y: r.estimate.map(|p| p.y),
            sq_error: r.sq_error,
            iterations: r.iterations,
            converged: r.converged,
            spurious: r.spurious,
            seed: r.seed,
            failure: r.failure.clone(),
        }
    }
}

impl From<RecordRow> for TrialRecord {
    fn from(r: RecordRow) -> Self {
        Self {
            trial_id: r.trial_id,
            sigma_db: r.sigma_db,
            algorithm: r.algorithm,
            class: r.class,
            true_source: Point2::new(r.true_x, r.true_y),
            initial: Point2::new(r.initial_x, r.initial_y),
            step: r.step,
            estimate: r.estimate_x.zip(r.estimate_y).map(|(x, y)| Point2::new(x, y)),
            sq_error: r.sq_error,
            iterations: r.iterations,
            converged: r.converged,
            spurious: r.spurious,
            seed: r.seed,
            failure: r.failure,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SummaryCsvRow {
    sigma_db: f64,
    algorithm: Algorithm,
    class: String,
    mean_sq_error: f64,
    trial_count: usize,
}

const ALL_CLASSES: &str = "all";

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn write_rows<T: Serialize>(path: &Path, header: &[&str], rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(csv_err(path))?;
    w.write_record(header).map_err(csv_err(path))?;
    for row in rows {
        w.serialize(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path, header: &[&str]) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let found = r.headers().map_err(csv_err(path))?;
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Config(format!("{}: unexpected CSV header", path.display())));
    }
    r.deserialize().collect::<std::result::Result<_, _>>().map_err(csv_err(path))
}

pub fn write_records(path: &Path, records: &[TrialRecord]) -> Result<()> {
    write_rows(path, &RECORD_HEADER, records.iter().map(RecordRow::from))
}

pub fn read_records(path: &Path) -> Result<Vec<TrialRecord>> {
    Ok(read_rows::<RecordRow>(path, &RECORD_HEADER)?
        .into_iter()
        .map(TrialRecord::from)
        .collect())
}

pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    write_rows(
        path,
        &SUMMARY_HEADER,
        rows.iter().map(|r| SummaryCsvRow {
            sigma_db: r.sigma_db,
            algorithm: r.algorithm,
            class: r.class.map_or(ALL_CLASSES, TargetClass::as_str).to_string(),
            mean_sq_error: r.mean_sq_error,
            trial_count: r.trial_count,
        }),
    )
}

pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>> {
    read_rows::<SummaryCsvRow>(path, &SUMMARY_HEADER)?
        .into_iter()
        .map(|r| {
            let class = match r.class.as_str() {
                ALL_CLASSES => None,
                "guaranteed-like" => Some(TargetClass::GuaranteedLike),
                "unguaranteed" => Some(TargetClass::Unguaranteed),
                other => return Err(Error::Config(format!("unknown class `{other}` in {}", path.display()))),
            };
            Ok(SummaryRow {
                sigma_db: r.sigma_db,
                algorithm: r.algorithm,
                class,
                mean_sq_error: r.mean_sq_error,
                trial_count: r.trial_count,
            })
        })
        .collect()
}

pub fn write_trajectory(path: &Path, trajectory: &Trajectory) -> Result<()> {
    write_rows(
        path,
        &TRAJECTORY_HEADER,
        trajectory.points.iter().map(|&(k, p)| (k, p.x, p.y)),
    )
}

/// Writes `text` verbatim, creating parent directories.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    File::create(path).and_then(|mut f| f.write_all(text.as_bytes())).map_err(io)
}
