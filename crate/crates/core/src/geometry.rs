//! Planar points, measurement circles and radical axes.
//!
//! The radical axis of two non-concentric circles is the line of points with
//! equal power `‖p − c‖² − r²` with respect to both. It is perpendicular to the
//! line of centers and passes through the intersection points when the circles
//! meet. Axes are stored as a foot point on the line of centers together with
//! the unnormalized center difference `e = c_j − c_i`, so the line is
//! `{p : (p − foot)·e = 0}`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::Scenario;

/// A point (or free vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

/// Vectors share the point representation.
pub type Vector2 = Point2;

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the planar cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2::new(x, y)
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Point2 {
    fn add_assign(&mut self, rhs: Point2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl SubAssign for Point2 {
    fn sub_assign(&mut self, rhs: Point2) {
        self.x -= rhs.x;
        self.y -= rhs.y;
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Mul<Point2> for f64 {
    type Output = Point2;
    fn mul(self, p: Point2) -> Point2 {
        p * self
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Circle `C(center, radius)`: the locus of a range measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    center: Point2,
    radius: f64,
}

impl Circle {
    pub fn new(center: Point2, radius: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::InvalidValue {
                what: "circle center",
                value: if center.x.is_finite() { center.y } else { center.x },
            });
        }
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::InvalidValue {
                what: "circle radius",
                value: radius,
            });
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> Point2 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Power of `p` with respect to this circle.
    pub fn power(&self, p: Point2) -> f64 {
        (p - self.center).norm_squared() - self.radius * self.radius
    }
}

/// The line `{p : (p − foot)·direction = 0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadicalAxis {
    foot: Point2,
    direction: Vector2,
}

impl RadicalAxis {
    /// Builds an axis from its foot point and (nonzero) normal direction.
    pub fn new(foot: Point2, direction: Vector2) -> Result<Self> {
        if !foot.is_finite() || !direction.is_finite() {
            return Err(Error::InvalidValue {
                what: "radical axis",
                value: f64::NAN,
            });
        }
        if direction.norm_squared() == 0.0 {
            return Err(Error::InvalidValue {
                what: "radical axis direction norm",
                value: 0.0,
            });
        }
        Ok(Self { foot, direction })
    }

    /// The point where the axis crosses the line of centers.
    pub fn foot(&self) -> Point2 {
        self.foot
    }

    /// Unnormalized center difference; normal to the axis line.
    pub fn direction(&self) -> Vector2 {
        self.direction
    }

    /// `(p − foot)·direction`; zero exactly on the line.
    pub fn residual(&self, p: Point2) -> f64 {
        (p - self.foot).dot(self.direction)
    }

    /// Euclidean distance from `p` to the line.
    pub fn distance_to(&self, p: Point2) -> f64 {
        self.residual(p).abs() / self.direction.norm()
    }

    /// Orthogonal projection of `p` onto the line.
    pub fn project(&self, p: Point2) -> Point2 {
        p - self.direction * (self.residual(p) / self.direction.norm_squared())
    }

    /// A point on the line, `t` units along it from the foot.
    pub fn point_at(&self, t: f64) -> Point2 {
        let along = self.direction.perp() * (1.0 / self.direction.norm());
        self.foot + along * t
    }
}

fn concentric_threshold(ci: Point2, cj: Point2) -> f64 {
    1e-12 * 1f64.max(ci.norm()).max(cj.norm())
}

/// Radical axis of two non-concentric circles.
///
/// The circles need not intersect; only coincident centers are rejected.
pub fn radical_axis(ci: &Circle, cj: &Circle) -> Result<RadicalAxis> {
    let e = cj.center - ci.center;
    let len = e.norm();
    if len <= concentric_threshold(ci.center, cj.center) {
        return Err(Error::ConcentricCircles { pair: None });
    }
    let (di, dj) = (ci.radius, cj.radius);
    // signed distance from ci's center to the foot, along e
    let a = (len * len + di * di - dj * dj) / (2.0 * len);
    let foot = ci.center + e * (a / len);
    RadicalAxis::new(foot, e)
}

/// Axes from consecutive anchor pairs `(k, k+1)`, `k = 0..N-2`.
pub fn sequential_axes(scenario: &Scenario) -> Result<Vec<RadicalAxis>> {
    let n = scenario.anchors().len();
    let pairs: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|k| (k, k + 1)).collect();
    axes_from_pairs(scenario, &pairs)
}

/// Axes from an arbitrary list of anchor index pairs.
///
/// A concentric pair is reported with its position in `pairs`.
pub fn axes_from_pairs(scenario: &Scenario, pairs: &[(usize, usize)]) -> Result<Vec<RadicalAxis>> {
    let n = scenario.anchors().len();
    if n < 3 {
        return Err(Error::TooFewAnchors { found: n });
    }
    let circles = scenario.circles()?;
    pairs
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| {
            let (ci, cj) = match (circles.get(i), circles.get(j)) {
                (Some(ci), Some(cj)) => (ci, cj),
                _ => {
                    return Err(Error::Config(format!(
                        "pair ({i}, {j}) out of range for {n} anchors"
                    )))
                }
            };
            radical_axis(ci, cj).map_err(|err| match err {
                Error::ConcentricCircles { .. } => Error::ConcentricCircles { pair: Some(k) },
                other => other,
            })
        })
        .collect()
}

/// Intersection points of two non-concentric circles: none, one (tangency) or two.
pub fn circle_intersections(ci: &Circle, cj: &Circle) -> Result<Vec<Point2>> {
    let e = cj.center - ci.center;
    let len = e.norm();
    if len <= concentric_threshold(ci.center, cj.center) {
        return Err(Error::ConcentricCircles { pair: None });
    }
    let (ri, rj) = (ci.radius, cj.radius);
    let slack = 1e-12 * len.max(ri).max(rj).max(1.0);
    if len > ri + rj + slack || len < (ri - rj).abs() - slack {
        return Ok(Vec::new());
    }
    let unit = e * (1.0 / len);
    let along = (len * len + ri * ri - rj * rj) / (2.0 * len);
    let mid = ci.center + unit * along;
    let h_sq = ri * ri - along * along;
    if h_sq <= slack * ri.max(1.0) {
        return Ok(vec![mid]);
    }
    let offset = unit.perp() * h_sq.sqrt();
    Ok(vec![mid + offset, mid - offset])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(x: f64, y: f64, r: f64) -> Circle {
        Circle::new(Point2::new(x, y), r).unwrap()
    }

    fn close(a: Point2, b: Point2, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn axis_of_first_example_pair() {
        let axis = radical_axis(&circle(1.0, 1.0, 2f64.sqrt()), &circle(1.0, 3.0, 10f64.sqrt())).unwrap();
        assert!(close(axis.foot(), Point2::new(1.0, 0.0), 1e-12));
        assert_eq!(axis.direction(), Point2::new(0.0, 2.0));
        assert!(axis.residual(Point2::ORIGIN).abs() < 1e-12);
    }

    #[test]
    fn equal_radii_give_perpendicular_bisector() {
        let axis = radical_axis(&circle(1.0, 3.0, 10f64.sqrt()), &circle(3.0, 1.0, 10f64.sqrt())).unwrap();
        assert!(close(axis.foot(), Point2::new(2.0, 2.0), 1e-12));
        assert_eq!(axis.direction(), Point2::new(2.0, -2.0));
    }

    #[test]
    fn concentric_circles_are_rejected() {
        let err = radical_axis(&circle(0.0, 0.0, 1.0), &circle(0.0, 0.0, 2.0)).unwrap_err();
        assert!(matches!(err, Error::ConcentricCircles { pair: None }));
        assert!(circle_intersections(&circle(0.0, 0.0, 1.0), &circle(0.0, 0.0, 2.0)).is_err());
    }

    #[test]
    fn concentric_threshold_is_relative() {
        let a = circle(1e9, 1e9, 5.0);
        let b = circle(1e9 + 1e-4, 1e9, 5.0);
        assert!(radical_axis(&a, &b).is_err());
        let c = circle(0.0, 0.0, 1.0);
        let d = circle(1e-6, 0.0, 1.0);
        assert!(radical_axis(&c, &d).is_ok());
    }

    #[test]
    fn non_intersecting_circles_still_have_an_axis() {
        let axis = radical_axis(&circle(0.0, 0.0, 1.0), &circle(10.0, 0.0, 1.0)).unwrap();
        assert!(close(axis.foot(), Point2::new(5.0, 0.0), 1e-12));
    }

    #[test]
    fn tangent_circles_meet_once() {
        let pts = circle_intersections(&circle(0.0, 0.0, 1.0), &circle(2.0, 0.0, 1.0)).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(close(pts[0], Point2::new(1.0, 0.0), 1e-12));
    }

    #[test]
    fn intersection_contains_known_source() {
        let pts =
            circle_intersections(&circle(1.0, 1.0, 2f64.sqrt()), &circle(1.0, 3.0, 10f64.sqrt())).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts.iter().any(|p| close(*p, Point2::ORIGIN, 1e-12)));
    }

    #[test]
    fn disjoint_and_nested_circles_do_not_meet() {
        assert!(circle_intersections(&circle(0.0, 0.0, 1.0), &circle(10.0, 0.0, 1.0))
            .unwrap()
            .is_empty());
        assert!(circle_intersections(&circle(0.0, 0.0, 5.0), &circle(1.0, 0.0, 1.0))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn invalid_circles() {
        assert!(Circle::new(Point2::ORIGIN, -1.0).is_err());
        assert!(Circle::new(Point2::new(f64::NAN, 0.0), 1.0).is_err());
        assert!(Circle::new(Point2::ORIGIN, f64::INFINITY).is_err());
    }

    #[test]
    fn projection_lands_on_axis() {
        let axis = RadicalAxis::new(Point2::new(1.0, 2.0), Point2::new(3.0, -1.0)).unwrap();
        let p = axis.project(Point2::new(-4.0, 7.0));
        assert!(axis.residual(p).abs() < 1e-12);
        assert!(axis.residual(axis.point_at(3.5)).abs() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn pt() -> impl Strategy<Value = Point2> {
            (-50.0..50.0f64, -50.0..50.0f64).prop_map(|(x, y)| Point2::new(x, y))
        }

        fn circle_pair() -> impl Strategy<Value = (Circle, Circle)> {
            (pt(), pt(), 0.0..40.0f64, 0.0..40.0f64)
                .prop_filter("non-concentric", |(a, b, _, _)| (*a - *b).norm() > 1e-3)
                .prop_map(|(a, b, ra, rb)| (Circle::new(a, ra).unwrap(), Circle::new(b, rb).unwrap()))
        }

        proptest! {
            #[test]
            fn points_on_axis_have_equal_power((ci, cj) in circle_pair(), t in -100.0..100.0f64) {
                let axis = radical_axis(&ci, &cj).unwrap();
                let p = axis.point_at(t);
                let diff = ci.power(p) - cj.power(p);
                prop_assert!(diff.abs() <= 1e-9 * p.norm_squared().max(1.0),
                    "power difference {diff} at {p:?}");
            }

            #[test]
            fn axis_normal_is_parallel_to_centers((ci, cj) in circle_pair()) {
                let axis = radical_axis(&ci, &cj).unwrap();
                let e = cj.center() - ci.center();
                let d = axis.direction();
                let sin = d.cross(e) / (d.norm() * e.norm());
                prop_assert!(sin.abs() <= 1e-12);
            }

            #[test]
            fn intersections_lie_on_axis((ci, cj) in circle_pair()) {
                let axis = radical_axis(&ci, &cj).unwrap();
                for p in circle_intersections(&ci, &cj).unwrap() {
                    prop_assert!(axis.distance_to(p) <= 1e-9, "distance {}", axis.distance_to(p));
                }
            }

            #[test]
            fn axis_is_symmetric_in_its_circles((ci, cj) in circle_pair()) {
                let fwd = radical_axis(&ci, &cj).unwrap();
                let rev = radical_axis(&cj, &ci).unwrap();
                let projected = fwd.project(rev.foot());
                prop_assert!((projected - fwd.foot()).norm() <= 1e-12);
            }
        }
    }
}
