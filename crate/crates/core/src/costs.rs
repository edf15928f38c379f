//! The radical-axis cost and the squared-range baseline.
//!
//! `ConvexCost` is `J(y) = ½ Σ ((y − y_i)·e_i)²` over radical axes `(y_i, e_i)`.
//! It is a convex quadratic whose minimizer, for exact ranges and non-collinear
//! anchors, is the source position. `BaselineCost` is the classical
//! `J₁(y) = ½ Σ λ_i (‖x_i − y‖² − d_i²)²`, which can have spurious stationary
//! points.

use crate::error::{Error, Result};
use crate::geometry::{sequential_axes, Point2, RadicalAxis, Vector2};
use crate::scenario::Scenario;

/// Anything the descent loop can minimize.
pub trait Objective {
    fn value(&self, y: Point2) -> f64;
    fn gradient(&self, y: Point2) -> Vector2;
}

impl<T: Objective + ?Sized> Objective for &T {
    fn value(&self, y: Point2) -> f64 {
        (**self).value(y)
    }
    fn gradient(&self, y: Point2) -> Vector2 {
        (**self).gradient(y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCost {
    axes: Vec<RadicalAxis>,
}

impl ConvexCost {
    pub fn new(axes: Vec<RadicalAxis>) -> Result<Self> {
        if axes.len() < 2 {
            return Err(Error::TooFewAxes { found: axes.len() });
        }
        Ok(Self { axes })
    }

    /// Cost over the sequential anchor pairs of `scenario`.
    pub fn from_scenario(scenario: &Scenario) -> Result<Self> {
        Self::new(sequential_axes(scenario)?)
    }

    pub fn axes(&self) -> &[RadicalAxis] {
        &self.axes
    }

    /// Collapse to `½ yᵀHy − bᵀy + const`.
    pub fn quadratic(&self) -> Quadratic2 {
        assemble_quadratic(self)
    }
}

impl Objective for ConvexCost {
    fn value(&self, y: Point2) -> f64 {
        convex_value(self, y)
    }
    fn gradient(&self, y: Point2) -> Vector2 {
        convex_gradient(self, y)
    }
}

pub fn convex_value(cost: &ConvexCost, y: Point2) -> f64 {
    0.5 * cost.axes.iter().map(|a| a.residual(y).powi(2)).sum::<f64>()
}

pub fn convex_gradient(cost: &ConvexCost, y: Point2) -> Vector2 {
    cost.axes
        .iter()
        .fold(Point2::ORIGIN, |acc, a| acc + a.direction() * a.residual(y))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineCost {
    anchors: Vec<Point2>,
    squared_ranges: Vec<f64>,
    weights: Vec<f64>,
}

impl BaselineCost {
    pub fn new(anchors: Vec<Point2>, squared_ranges: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let n = anchors.len();
        if n < 3 {
            return Err(Error::TooFewAnchors { found: n });
        }
        for (what, len) in [("squared ranges", squared_ranges.len()), ("weights", weights.len())] {
            if len != n {
                return Err(Error::LengthMismatch {
                    what,
                    expected: n,
                    found: len,
                });
            }
        }
        if let Some(&w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidValue { what: "weight", value: w });
        }
        if let Some(&d) = squared_ranges.iter().find(|d| !(**d >= 0.0 && d.is_finite())) {
            return Err(Error::InvalidValue {
                what: "squared range",
                value: d,
            });
        }
        Ok(Self {
            anchors,
            squared_ranges,
            weights,
        })
    }

    /// Unit weights over the scenario's anchors and ranges.
    pub fn from_scenario(scenario: &Scenario) -> Result<Self> {
        let n = scenario.anchors().len();
        Self::new(scenario.anchors().to_vec(), scenario.squared_ranges(), vec![1.0; n])
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        self.weights = weights;
        Self::new(self.anchors, self.squared_ranges, self.weights)
    }

    pub fn anchors(&self) -> &[Point2] {
        &self.anchors
    }

    fn residuals(&self, y: Point2) -> impl Iterator<Item = (Point2, f64, f64)> + '_ {
        self.anchors
            .iter()
            .zip(&self.squared_ranges)
            .zip(&self.weights)
            .map(move |((&x, &d_sq), &w)| (x, w, (x - y).norm_squared() - d_sq))
    }
}

impl Objective for BaselineCost {
    fn value(&self, y: Point2) -> f64 {
        baseline_value(self, y)
    }
    fn gradient(&self, y: Point2) -> Vector2 {
        baseline_gradient(self, y)
    }
}

pub fn baseline_value(cost: &BaselineCost, y: Point2) -> f64 {
    0.5 * cost.residuals(y).map(|(_, w, r)| w * r * r).sum::<f64>()
}

pub fn baseline_gradient(cost: &BaselineCost, y: Point2) -> Vector2 {
    cost.residuals(y)
        .fold(Point2::ORIGIN, |acc, (x, w, r)| acc + (y - x) * (2.0 * w * r))
}

/// `J(y) = ½ yᵀHy − bᵀy + const`, so `∇J(y) = Hy − b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic2 {
    pub hessian: [[f64; 2]; 2],
    pub rhs: Vector2,
}

impl Quadratic2 {
    pub fn trace(&self) -> f64 {
        self.hessian[0][0] + self.hessian[1][1]
    }

    pub fn det(&self) -> f64 {
        self.hessian[0][0] * self.hessian[1][1] - self.hessian[0][1] * self.hessian[1][0]
    }

    /// Eigenvalues `(min, max)` of the symmetric Hessian.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let [[a, b], [_, d]] = self.hessian;
        let mean = 0.5 * (a + d);
        let radius = (0.5 * (a - d)).hypot(b);
        (mean - radius, mean + radius)
    }

    pub fn apply(&self, v: Vector2) -> Vector2 {
        let [[a, b], [c, d]] = self.hessian;
        Point2::new(a * v.x + b * v.y, c * v.x + d * v.y)
    }

    pub fn gradient(&self, y: Point2) -> Vector2 {
        self.apply(y) - self.rhs
    }

    /// True when `det(H) ≤ 1e-12·trace(H)²`, i.e. all axis directions are
    /// (numerically) parallel.
    pub fn is_singular(&self) -> bool {
        let tr = self.trace();
        self.det() <= 1e-12 * tr * tr
    }
}

pub fn assemble_quadratic(cost: &ConvexCost) -> Quadratic2 {
    let mut hessian = [[0.0; 2]; 2];
    let mut rhs = Point2::ORIGIN;
    for axis in cost.axes() {
        let e = axis.direction();
        hessian[0][0] += e.x * e.x;
        hessian[0][1] += e.x * e.y;
        hessian[1][1] += e.y * e.y;
        rhs += e * e.dot(axis.foot());
    }
    hessian[1][0] = hessian[0][1];
    Quadratic2 { hessian, rhs }
}

/// Largest Hessian eigenvalue: a global Lipschitz constant of `∇J`.
pub fn lipschitz_bound(q: &Quadratic2) -> f64 {
    q.eigenvalues().1.max(0.0)
}
