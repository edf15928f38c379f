//! Fixed-step gradient descent and the closed-form minimizer of the convex cost.

use crate::costs::{lipschitz_bound, Objective, Quadratic2};
use crate::error::{Error, Result};
use crate::geometry::Point2;

/// Step size used by the reproduced experiments.
pub const DEFAULT_MU: f64 = 0.001;
pub const DEFAULT_MAX_ITERS: usize = 200_000;
pub const DEFAULT_STEP_SAFETY: f64 = 0.9;

/// Every iterate is kept up to this index; after it only every
/// [`TRAJECTORY_STRIDE`]th one.
pub const TRAJECTORY_FULL_PREFIX: usize = 10_000;
pub const TRAJECTORY_STRIDE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub mu: f64,
    pub max_iters: usize,
    /// Stop once `‖∇‖ ≤ grad_tol`.
    pub grad_tol: f64,
    pub initial: Point2,
    pub record_trajectory: bool,
}

impl SolverConfig {
    pub fn new(mu: f64, initial: Point2) -> Self {
        Self {
            mu,
            max_iters: DEFAULT_MAX_ITERS,
            grad_tol: 1e-8,
            initial,
            record_trajectory: false,
        }
    }

    /// Defaults with the stopping tolerance scaled to the problem:
    /// `grad_tol = 1e-8·(1 + ‖b‖)`.
    pub fn for_quadratic(q: &Quadratic2, mu: f64, initial: Point2) -> Self {
        Self {
            grad_tol: default_grad_tol(q),
            ..Self::new(mu, initial)
        }
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_grad_tol(mut self, grad_tol: f64) -> Self {
        self.grad_tol = grad_tol;
        self
    }

    pub fn recording(mut self) -> Self {
        self.record_trajectory = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::InvalidValue { what: "mu", value: self.mu });
        }
        if !(self.grad_tol > 0.0) {
            return Err(Error::InvalidValue {
                what: "grad_tol",
                value: self.grad_tol,
            });
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidValue {
                what: "max_iters",
                value: 0.0,
            });
        }
        if !self.initial.is_finite() {
            return Err(Error::InvalidValue {
                what: "initial estimate",
                value: f64::NAN,
            });
        }
        Ok(())
    }
}

pub fn default_grad_tol(q: &Quadratic2) -> f64 {
    1e-8 * (1.0 + q.rhs.norm())
}

/// Decimated record of the iterates, each tagged with its iteration index.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub points: Vec<(usize, Point2)>,
}

impl Trajectory {
    fn keeps(k: usize) -> bool {
        k <= TRAJECTORY_FULL_PREFIX || k % TRAJECTORY_STRIDE == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub estimate: Point2,
    pub iterations: usize,
    pub converged: bool,
    pub trajectory: Option<Trajectory>,
    pub final_cost: f64,
    pub final_grad_norm: f64,
}

/// Runs `y[k+1] = y[k] − μ∇f(y[k])` from `cfg.initial` until the gradient
/// norm drops to `cfg.grad_tol` or `cfg.max_iters` updates have been made.
pub fn descend<F: Objective + ?Sized>(cost: &F, cfg: &SolverConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let mut y = cfg.initial;
    let mut trajectory = cfg.record_trajectory.then(Trajectory::default);
    let mut k = 0;
    loop {
        let g = cost.gradient(y);
        if !g.is_finite() {
            return Err(Error::NonFinite { iteration: k });
        }
        let g_norm = g.norm();
        let converged = g_norm <= cfg.grad_tol;
        let last = converged || k == cfg.max_iters;
        if let Some(t) = trajectory.as_mut() {
            if last || Trajectory::keeps(k) {
                t.points.push((k, y));
            }
        }
        if last {
            return Ok(SolveResult {
                estimate: y,
                iterations: k,
                converged,
                trajectory,
                final_cost: cost.value(y),
                final_grad_norm: g_norm,
            });
        }
        y -= g * cfg.mu;
        k += 1;
        if !y.is_finite() {
            return Err(Error::NonFinite { iteration: k });
        }
    }
}

/// `safety · 2 / λ_max(H)`; any `safety ∈ (0, 1)` guarantees monotone descent.
pub fn auto_step(q: &Quadratic2, safety: f64) -> Result<f64> {
    if !(safety > 0.0 && safety <= 1.0) {
        return Err(Error::InvalidValue {
            what: "step safety factor",
            value: safety,
        });
    }
    let lambda_max = lipschitz_bound(q);
    if !(lambda_max > 0.0 && lambda_max.is_finite()) {
        return Err(Error::DegenerateCost { lambda_max });
    }
    Ok(safety * 2.0 / lambda_max)
}

/// Unique stationary point `H⁻¹b` of the convex cost.
pub fn solve_direct(q: &Quadratic2) -> Result<Point2> {
    let tr = q.trace();
    if !(tr > 0.0) {
        return Err(Error::DegenerateCost {
            lambda_max: lipschitz_bound(q),
        });
    }
    if q.is_singular() {
        return Err(Error::CollinearAnchors);
    }
    let det = q.det();
    let [[a, b], [c, d]] = q.hessian;
    let r = q.rhs;
    Ok(Point2::new((d * r.x - b * r.y) / det, (a * r.y - c * r.x) / det))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::{BaselineCost, ConvexCost};
    use crate::scenario::Scenario;

    fn example_convex() -> ConvexCost {
        ConvexCost::from_scenario(&Scenario::spurious_example()).unwrap()
    }

    #[test]
    fn convex_descent_reaches_source() {
        let c = example_convex();
        let cfg = SolverConfig::for_quadratic(&c.quadratic(), DEFAULT_MU, Point2::new(3.0, 2.0));
        let res = descend(&c, &cfg).unwrap();
        assert!(res.converged);
        assert!(res.estimate.norm() <= 1e-3, "{:?}", res.estimate);
    }

    #[test]
    fn baseline_descent_is_trapped() {
        let b = BaselineCost::from_scenario(&Scenario::spurious_example()).unwrap();
        let cfg = SolverConfig::new(DEFAULT_MU, Point2::new(3.0, 2.0));
        let res = descend(&b, &cfg).unwrap();
        assert!((res.estimate - Point2::new(3.0, 3.0)).norm() <= 1e-3, "{:?}", res.estimate);
    }

    #[test]
    fn start_at_minimizer_takes_no_steps() {
        let c = example_convex();
        let res = descend(&c, &SolverConfig::new(DEFAULT_MU, Point2::ORIGIN)).unwrap();
        assert_eq!(res.iterations, 0);
        assert!(res.converged);
    }

    #[test]
    fn iteration_cap_is_respected() {
        let c = example_convex();
        let cfg = SolverConfig::new(DEFAULT_MU, Point2::new(3.0, 2.0)).with_max_iters(5);
        let res = descend(&c, &cfg).unwrap();
        assert_eq!(res.iterations, 5);
        assert!(!res.converged);
    }

    #[test]
    fn oversized_step_on_baseline_diverges() {
        let b = BaselineCost::from_scenario(&Scenario::spurious_example()).unwrap();
        let cfg = SolverConfig::new(1.0, Point2::new(30.0, 20.0));
        assert!(matches!(descend(&b, &cfg), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn invalid_configs() {
        let c = example_convex();
        assert!(descend(&c, &SolverConfig::new(0.0, Point2::ORIGIN)).is_err());
        assert!(descend(&c, &SolverConfig::new(0.1, Point2::ORIGIN).with_grad_tol(0.0)).is_err());
        assert!(descend(&c, &SolverConfig::new(0.1, Point2::ORIGIN).with_max_iters(0)).is_err());
    }

    #[test]
    fn trajectory_is_decimated_after_prefix() {
        let c = example_convex();
        let cfg = SolverConfig::new(1e-5, Point2::new(3.0, 2.0))
            .with_max_iters(20_005)
            .recording();
        let res = descend(&c, &cfg).unwrap();
        let pts = res.trajectory.unwrap().points;
        assert_eq!(pts[0], (0, Point2::new(3.0, 2.0)));
        assert_eq!(pts[TRAJECTORY_FULL_PREFIX].0, TRAJECTORY_FULL_PREFIX);
        assert_eq!(pts[TRAJECTORY_FULL_PREFIX + 1].0, TRAJECTORY_FULL_PREFIX + TRAJECTORY_STRIDE);
        assert_eq!(pts.last().unwrap(), &(res.iterations, res.estimate));
        assert_eq!(pts.len(), TRAJECTORY_FULL_PREFIX + 1 + 1000 + 1);
    }

    #[test]
    fn auto_step_values() {
        let q = example_convex().quadratic();
        let mu = auto_step(&q, 0.9).unwrap();
        assert!((mu - 1.8 / (6.0 + 2.0 * 5f64.sqrt())).abs() < 1e-12);
        assert!((mu - 0.17188).abs() < 1e-5);
        let id = Quadratic2 {
            hessian: [[1.0, 0.0], [0.0, 1.0]],
            rhs: Point2::ORIGIN,
        };
        assert_eq!(auto_step(&id, 1.0).unwrap(), 2.0);
        let zero = Quadratic2 {
            hessian: [[0.0; 2]; 2],
            rhs: Point2::ORIGIN,
        };
        assert!(matches!(auto_step(&zero, 0.9), Err(Error::DegenerateCost { .. })));
        assert!(auto_step(&id, 0.0).is_err());
    }

    #[test]
    fn direct_solution() {
        let q = example_convex().quadratic();
        assert!(solve_direct(&q).unwrap().norm() < 1e-12);
        let anchors = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 2.0), Point2::new(2.0, 4.0)];
        let s = Scenario::noise_free(anchors, Point2::new(5.0, 1.0), "collinear").unwrap();
        let q = ConvexCost::from_scenario(&s).unwrap().quadratic();
        assert!(matches!(solve_direct(&q), Err(Error::CollinearAnchors)));
    }

    mod props {
        use super::*;
        use crate::costs::convex_value;
        use proptest::prelude::*;

        fn pt(r: f64) -> impl Strategy<Value = Point2> {
            (-r..r, -r..r).prop_map(|(x, y)| Point2::new(x, y))
        }

        fn scenario() -> impl Strategy<Value = Scenario> {
            (prop::collection::vec(pt(10.0), 3..7), pt(10.0))
                .prop_filter_map("ill-conditioned", |(anchors, source)| {
                    let s = Scenario::noise_free(anchors, source, "prop").ok()?;
                    let q = ConvexCost::from_scenario(&s).ok()?.quadratic();
                    (q.det() > 1e-3 * q.trace().powi(2)).then_some(s)
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]

            #[test]
            fn auto_step_descent_is_monotone(s in scenario(), y0 in pt(100.0)) {
                let c = ConvexCost::from_scenario(&s).unwrap();
                let q = c.quadratic();
                let cfg = SolverConfig::new(auto_step(&q, DEFAULT_STEP_SAFETY).unwrap(), y0)
                    .with_grad_tol(1e-10)
                    .recording();
                let res = descend(&c, &cfg).unwrap();
                let values: Vec<f64> = res.trajectory.unwrap().points.iter()
                    .map(|&(_, p)| convex_value(&c, p)).collect();
                for w in values.windows(2) {
                    prop_assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-18);
                }
            }

            #[test]
            fn descent_agrees_with_direct_solution(s in scenario(), y0 in pt(100.0)) {
                let c = ConvexCost::from_scenario(&s).unwrap();
                let q = c.quadratic();
                let cfg = SolverConfig::new(auto_step(&q, DEFAULT_STEP_SAFETY).unwrap(), y0)
                    .with_grad_tol(1e-10);
                let res = descend(&c, &cfg).unwrap();
                let direct = solve_direct(&q).unwrap();
                prop_assert!(res.converged);
                prop_assert!((res.estimate - direct).norm() <= 1e-6);
                prop_assert!((direct - s.source()).norm() <= 1e-9);
            }

            #[test]
            fn descent_is_deterministic(s in scenario(), y0 in pt(100.0)) {
                let c = ConvexCost::from_scenario(&s).unwrap();
                let cfg = SolverConfig::new(auto_step(&c.quadratic(), 0.5).unwrap(), y0).recording();
                prop_assert_eq!(descend(&c, &cfg).unwrap(), descend(&c, &cfg).unwrap());
            }
        }
    }
}
