//! Anchors, a source position and the measured ranges between them.

use crate::error::{Error, Result};
use crate::geometry::{Circle, Point2};

/// One localization instance: known anchors `x_i`, the true source `y*`
/// and measured distances `d_i` (exact or synthesized).
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    anchors: Vec<Point2>,
    source: Point2,
    ranges: Vec<f64>,
    label: String,
}

impl Scenario {
    pub fn new(
        anchors: Vec<Point2>,
        source: Point2,
        ranges: Vec<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if anchors.len() < 3 {
            return Err(Error::TooFewAnchors { found: anchors.len() });
        }
        if ranges.len() != anchors.len() {
            return Err(Error::LengthMismatch {
                what: "ranges",
                expected: anchors.len(),
                found: ranges.len(),
            });
        }
        if let Some(bad) = anchors.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidValue {
                what: "anchor coordinate",
                value: if bad.x.is_finite() { bad.y } else { bad.x },
            });
        }
        if !source.is_finite() {
            return Err(Error::InvalidValue {
                what: "source coordinate",
                value: if source.x.is_finite() { source.y } else { source.x },
            });
        }
        if let Some(&bad) = ranges.iter().find(|r| !(**r >= 0.0 && r.is_finite())) {
            return Err(Error::InvalidValue {
                what: "range",
                value: bad,
            });
        }
        Ok(Self {
            anchors,
            source,
            ranges,
            label: label.into(),
        })
    }

    /// Scenario with exact distances `‖source − x_i‖`.
    pub fn noise_free(anchors: Vec<Point2>, source: Point2, label: impl Into<String>) -> Result<Self> {
        let ranges = anchors.iter().map(|a| a.distance(source)).collect();
        Self::new(anchors, source, ranges, label)
    }

    /// The 3-anchor configuration with a stable spurious stationary point of
    /// the squared-range cost at `[3, 3]`; true source at the origin.
    pub fn spurious_example() -> Self {
        let anchors = vec![Point2::new(1.0, 1.0), Point2::new(1.0, 3.0), Point2::new(3.0, 1.0)];
        let ranges = vec![2f64.sqrt(), 10f64.sqrt(), 10f64.sqrt()];
        Self::new(anchors, Point2::ORIGIN, ranges, "spurious-example").expect("valid constant scenario")
    }

    /// Same anchors and source, different ranges.
    pub fn with_ranges(&self, ranges: Vec<f64>) -> Result<Self> {
        Self::new(self.anchors.clone(), self.source, ranges, self.label.clone())
    }

    pub fn anchors(&self) -> &[Point2] {
        &self.anchors
    }

    pub fn source(&self) -> Point2 {
        self.source
    }

    pub fn ranges(&self) -> &[f64] {
        &self.ranges
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn squared_ranges(&self) -> Vec<f64> {
        self.ranges.iter().map(|d| d * d).collect()
    }

    /// Measurement circles `C(x_i, d_i)`.
    pub fn circles(&self) -> Result<Vec<Circle>> {
        self.anchors
            .iter()
            .zip(&self.ranges)
            .map(|(&a, &d)| Circle::new(a, d))
            .collect()
    }
}
