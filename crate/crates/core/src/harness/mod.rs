//! Experiment harness: the spurious-point example, Monte Carlo noise sweeps,
//! configuration files and CSV output.

pub mod config;
pub mod output;
pub mod sweep;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::Point2;

pub use config::{Ellipse, RssConfig, SampleBox, ScenarioFile, SweepConfig, SCHEMA_VERSION};
pub use output::{
    read_records, read_summary, write_records, write_summary, write_trajectory, RECORD_HEADER,
    SUMMARY_HEADER, TRAJECTORY_HEADER,
};
pub use sweep::{
    group_stats, run_example_spurious, run_example_spurious_with, run_sweep, summarize, GroupStats,
    SpuriousExample, SummaryRow, SweepResult,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Descent on the radical-axis cost.
    Convex,
    /// Descent on the squared-range cost.
    Baseline,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Convex => "convex",
            Algorithm::Baseline => "baseline",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Target population used when aggregating sweep errors.
///
/// Without an explicit ellipse in the sweep config, a target is
/// `GuaranteedLike` when noise-free baseline descent from the trial's initial
/// estimate reaches it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TargetClass {
    #[serde(rename = "guaranteed-like")]
    GuaranteedLike,
    #[serde(rename = "unguaranteed")]
    Unguaranteed,
}

impl TargetClass {
    pub const ALL: [TargetClass; 2] = [TargetClass::GuaranteedLike, TargetClass::Unguaranteed];

    pub fn as_str(self) -> &'static str {
        match self {
            TargetClass::GuaranteedLike => "guaranteed-like",
            TargetClass::Unguaranteed => "unguaranteed",
        }
    }
}

impl fmt::Display for TargetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One solve of one algorithm in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial_id: u64,
    pub sigma_db: f64,
    pub algorithm: Algorithm,
    pub class: TargetClass,
    pub true_source: Point2,
    pub initial: Point2,
    /// Step size actually used.
    pub step: f64,
    /// `None` when the solve failed.
    pub estimate: Option<Point2>,
    /// `‖estimate − true_source‖²`.
    pub sq_error: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Converged, but to a point other than the true source.
    pub spurious: bool,
    pub seed: u64,
    /// Error name and message for failed solves.
    pub failure: Option<String>,
}
