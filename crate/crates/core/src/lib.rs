//! Range-based 2-D source localization.
//!
//! The classical squared-range cost for locating a source from distances to
//! known anchors is non-convex and can trap gradient descent at spurious
//! stationary points. Replacing each pair of measurement circles by its
//! radical axis turns the problem into minimizing a convex quadratic whose
//! unique minimizer is the source when ranges are exact. This crate provides
//! the geometry, both costs, a fixed-step descent solver with a provably safe
//! step size, an RSS shadowing measurement model and an experiment harness.
//!
//! ```
//! use radloc::{costs::ConvexCost, scenario::Scenario, solver};
//! use radloc::geometry::Point2;
//!
//! let anchors = vec![Point2::new(0.0, 0.0), Point2::new(4.0, 0.0), Point2::new(0.0, 3.0)];
//! let scenario = Scenario::noise_free(anchors, Point2::new(1.0, 1.0), "demo").unwrap();
//! let cost = ConvexCost::from_scenario(&scenario).unwrap();
//! let q = cost.quadratic();
//! let mu = solver::auto_step(&q, 0.9).unwrap();
//! let cfg = solver::SolverConfig::new(mu, Point2::new(50.0, -20.0)).with_grad_tol(1e-10);
//! let result = solver::descend(&cost, &cfg).unwrap();
//! assert!(result.estimate.distance(Point2::new(1.0, 1.0)) < 1e-8);
//! ```

pub mod costs;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod measurement;
pub mod scenario;
pub mod solver;

pub use error::{Error, Result};
