//! TOML configuration files.
//!
//! Two documents are understood: a single-scenario file (for `solve` and
//! `axes`) and a sweep file. Field names are normative; unknown keys are
//! rejected.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Algorithm;
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::measurement::{noisy_ranges, RssModel, ShadowingSpec};
use crate::scenario::Scenario;
use crate::solver::{DEFAULT_MAX_ITERS, DEFAULT_MU};

pub const SCHEMA_VERSION: u32 = 1;

fn read_toml<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {}", path.display(), e.message())))
}

fn default_mu() -> f64 {
    DEFAULT_MU
}

fn default_max_iters() -> usize {
    DEFAULT_MAX_ITERS
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RssConfig {
    pub source_strength: f64,
    pub path_loss_exponent: f64,
}

impl Default for RssConfig {
    fn default() -> Self {
        Self {
            source_strength: 1.0,
            path_loss_exponent: 3.0,
        }
    }
}

impl RssConfig {
    pub fn model(&self) -> Result<RssModel> {
        RssModel::new(self.source_strength, self.path_loss_exponent)
    }
}

/// Shadowed-RSS range synthesis for a single scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub sigma_db: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub rss: RssConfig,
    #[serde(default = "one")]
    pub samples: u32,
}

fn one() -> u32 {
    1
}

/// Single-scenario document.
///
/// ```toml
/// label = "three anchors"
/// anchors = [[1, 1], [1, 3], [3, 1]]
/// source = [0, 0]
/// squared_ranges = [2, 10, 10]   # or `ranges`, or neither for exact ranges
/// algorithm = "convex"            # or "baseline"
/// initial = [3, 2]
/// mu = 0.001                      # or auto_step = true (convex only)
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub label: String,
    pub anchors: Vec<Point2>,
    pub source: Point2,
    pub ranges: Option<Vec<f64>>,
    pub squared_ranges: Option<Vec<f64>>,
    pub noise: Option<NoiseConfig>,
    #[serde(default = "convex")]
    pub algorithm: Algorithm,
    #[serde(default)]
    pub initial: Point2,
    #[serde(default = "default_mu")]
    pub mu: f64,
    #[serde(default)]
    pub auto_step: bool,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    pub grad_tol: Option<f64>,
    pub weights: Option<Vec<f64>>,
}

fn convex() -> Algorithm {
    Algorithm::Convex
}

impl ScenarioFile {
    pub fn load(path: &Path) -> Result<Self> {
        read_toml(path)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn scenario(&self) -> Result<Scenario> {
        if self.anchors.len() < 3 {
            return Err(Error::TooFewAnchors {
                found: self.anchors.len(),
            });
        }
        let given = [self.ranges.is_some(), self.squared_ranges.is_some(), self.noise.is_some()];
        if given.iter().filter(|g| **g).count() > 1 {
            return Err(Error::Config(
                "at most one of `ranges`, `squared_ranges` and `noise` may be given".into(),
            ));
        }
        let ranges = if let Some(r) = &self.ranges {
            r.clone()
        } else if let Some(sq) = &self.squared_ranges {
            if let Some(&bad) = sq.iter().find(|v| !(**v >= 0.0)) {
                return Err(Error::InvalidValue {
                    what: "squared range",
                    value: bad,
                });
            }
            sq.iter().map(|v| v.sqrt()).collect()
        } else if let Some(noise) = &self.noise {
            let spec = ShadowingSpec::new(noise.sigma_db, noise.seed)?.with_samples(noise.samples)?;
            noisy_ranges(&noise.rss.model()?, &spec, self.source, &self.anchors)?
        } else {
            self.anchors.iter().map(|a| a.distance(self.source)).collect()
        };
        Scenario::new(self.anchors.clone(), self.source, ranges, self.label.clone())
    }

    /// Squared ranges as written in the file when given that way, so exact
    /// values such as `d² = 2` are not routed through a square root.
    pub fn exact_squared_ranges(&self) -> Option<&[f64]> {
        self.squared_ranges.as_deref()
    }
}

/// Axis-aligned sampling rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleBox {
    pub min: Point2,
    pub max: Point2,
}

impl Default for SampleBox {
    fn default() -> Self {
        Self {
            min: Point2::new(-10.0, -10.0),
            max: Point2::new(10.0, 10.0),
        }
    }
}

/// Explicit target-classification region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ellipse {
    pub center: Point2,
    pub semi_axes: [f64; 2],
    /// Counter-clockwise rotation of the first semi-axis, radians.
    #[serde(default)]
    pub rotation: f64,
}

impl Ellipse {
    pub fn contains(&self, p: Point2) -> bool {
        let d = p - self.center;
        let (s, c) = self.rotation.sin_cos();
        let u = c * d.x + s * d.y;
        let v = -s * d.x + c * d.y;
        (u / self.semi_axes[0]).powi(2) + (v / self.semi_axes[1]).powi(2) <= 1.0
    }
}

/// Monte Carlo sweep document. See [`SweepConfig::shadowing_example`] for the
/// default values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub anchors: Vec<Point2>,
    #[serde(default)]
    pub rss: RssConfig,
    pub sigma_grid: Vec<f64>,
    pub trials: u64,
    #[serde(default)]
    pub sample_box: SampleBox,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "both")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_mu")]
    pub mu: f64,
    /// Use `0.9·2/λ_max(H)` per trial for the convex algorithm.
    #[serde(default)]
    pub auto_step: bool,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "one")]
    pub samples_per_estimate: u32,
    pub ellipse: Option<Ellipse>,
}

fn both() -> Vec<Algorithm> {
    vec![Algorithm::Convex, Algorithm::Baseline]
}

impl SweepConfig {
    /// Four RSS anchors, η = 3, σ from 0 to 5 dB, 1000 trials, μ = 0.001.
    pub fn shadowing_example() -> Self {
        Self {
            anchors: vec![
                Point2::new(-2.0, -1.0),
                Point2::new(-1.0, -3.0),
                Point2::new(-1.0, 1.0),
                Point2::new(1.0, 0.0),
            ],
            rss: RssConfig::default(),
            sigma_grid: vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
            trials: 1000,
            sample_box: SampleBox::default(),
            master_seed: 1,
            algorithms: both(),
            mu: DEFAULT_MU,
            auto_step: false,
            max_iters: DEFAULT_MAX_ITERS,
            samples_per_estimate: 1,
            ellipse: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let cfg: Self = read_toml(path)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("sweep config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.anchors.len() < 3 {
            return Err(Error::TooFewAnchors {
                found: self.anchors.len(),
            });
        }
        if self.sigma_grid.is_empty() {
            return Err(Error::Config("sigma_grid must not be empty".into()));
        }
        if let Some(&bad) = self.sigma_grid.iter().find(|s| !(**s >= 0.0 && s.is_finite())) {
            return Err(Error::InvalidValue {
                what: "sigma_grid entry",
                value: bad,
            });
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("algorithms must not be empty".into()));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::InvalidValue { what: "mu", value: self.mu });
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        if self.samples_per_estimate == 0 {
            return Err(Error::Config("samples_per_estimate must be at least 1".into()));
        }
        let b = &self.sample_box;
        if !(b.min.x < b.max.x && b.min.y < b.max.y) || !b.min.is_finite() || !b.max.is_finite() {
            return Err(Error::Config("sample_box must have min < max on both axes".into()));
        }
        if let Some(e) = &self.ellipse {
            if !(e.semi_axes[0] > 0.0 && e.semi_axes[1] > 0.0) {
                return Err(Error::Config("ellipse semi_axes must be positive".into()));
            }
        }
        self.rss.model()?;
        Ok(())
    }
}
