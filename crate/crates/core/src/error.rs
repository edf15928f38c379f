use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the localization pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("circles are concentric, radical axis undefined{}", pair_suffix(*.pair))]
    ConcentricCircles { pair: Option<usize> },

    #[error("need N > 2 anchors for 2-D localization, got {found}")]
    TooFewAnchors { found: usize },

    #[error("need at least 2 radical axes, got {found}")]
    TooFewAxes { found: usize },

    #[error("{what}: expected {expected} entries, got {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid value for {what}: {value}")]
    InvalidValue { what: &'static str, value: f64 },

    #[error("iterate left the finite range at iteration {iteration}")]
    NonFinite { iteration: usize },

    #[error("cost has no curvature (largest Hessian eigenvalue {lambda_max})")]
    DegenerateCost { lambda_max: f64 },

    #[error("anchors are collinear, minimizer is not unique")]
    CollinearAnchors,

    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),

    #[error("signal strength must be positive, got {0}")]
    NonPositiveSignal(f64),

    #[error("source coincides with anchor {anchor}")]
    SourceOnAnchor { anchor: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", .path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

fn pair_suffix(pair: Option<usize>) -> String {
    match pair {
        Some(i) => format!(" (pair {i})"),
        None => String::new(),
    }
}

impl Error {
    /// Variant name, used as a stable identifier on stderr.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ConcentricCircles { .. } => "ConcentricCircles",
            Error::TooFewAnchors { .. } => "TooFewAnchors",
            Error::TooFewAxes { .. } => "TooFewAxes",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::InvalidValue { .. } => "InvalidValue",
            Error::NonFinite { .. } => "NonFinite",
            Error::DegenerateCost { .. } => "DegenerateCost",
            Error::CollinearAnchors => "CollinearAnchors",
            Error::NonPositiveDistance(_) => "NonPositiveDistance",
            Error::NonPositiveSignal(_) => "NonPositiveSignal",
            Error::SourceOnAnchor { .. } => "SourceOnAnchor",
            Error::Config(_) => "Config",
            Error::Io { .. } => "Io",
            Error::Csv { .. } => "Csv",
        }
    }

    /// True for errors caused by malformed input rather than by the numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::TooFewAnchors { .. }
                | Error::TooFewAxes { .. }
                | Error::LengthMismatch { .. }
                | Error::InvalidValue { .. }
                | Error::Config(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
