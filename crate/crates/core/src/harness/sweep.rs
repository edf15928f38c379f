//! Example reproduction and Monte Carlo sweeps.
//!
//! Trial `t` of a sweep uses the sub-seed `master_seed ^ t`. Its ChaCha8
//! stream 0 draws the true source and then the initial estimate, both
//! uniformly in the sample box. Shadowing for every σ in the grid reuses the
//! same sub-seed on the noise stream, so the σ levels of one trial share
//! their standard-normal draws and differ only in scale.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::SweepConfig;
use super::{Algorithm, TargetClass, TrialRecord};
use crate::costs::{BaselineCost, ConvexCost, Objective};
use crate::error::Result;
use crate::geometry::Point2;
use crate::measurement::{noisy_ranges, ShadowingSpec};
use crate::scenario::Scenario;
use crate::solver::{
    auto_step, default_grad_tol, descend, SolveResult, SolverConfig, Trajectory, DEFAULT_MAX_ITERS,
    DEFAULT_MU, DEFAULT_STEP_SAFETY,
};

/// A noise-free baseline run counts as reaching the target within this distance.
pub const CLASS_TOLERANCE: f64 = 1e-3;

const SAMPLING_STREAM: u64 = 0;

/// Both algorithms on the three-anchor spurious-point scenario from `[3, 2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpuriousExample {
    pub baseline: TrialRecord,
    pub convex: TrialRecord,
    pub baseline_path: Trajectory,
    pub convex_path: Trajectory,
}

impl SpuriousExample {
    pub fn records(&self) -> [TrialRecord; 2] {
        [self.baseline.clone(), self.convex.clone()]
    }
}

pub fn run_example_spurious() -> Result<SpuriousExample> {
    run_example_spurious_with(DEFAULT_MU, DEFAULT_MAX_ITERS)
}

pub fn run_example_spurious_with(mu: f64, max_iters: usize) -> Result<SpuriousExample> {
    let scenario = Scenario::spurious_example();
    let initial = Point2::new(3.0, 2.0);
    let convex = ConvexCost::from_scenario(&scenario)?;
    let baseline = BaselineCost::new(scenario.anchors().to_vec(), vec![2.0, 10.0, 10.0], vec![1.0; 3])?;
    let cfg = SolverConfig::for_quadratic(&convex.quadratic(), mu, initial)
        .with_max_iters(max_iters)
        .recording();

    let base_run = descend(&baseline, &cfg)?;
    let conv_run = descend(&convex, &cfg)?;
    let class = classify_by_run(Ok(&base_run), scenario.source());
    let record = |algorithm, run: &SolveResult| {
        solved_record(0, 0.0, algorithm, class, scenario.source(), initial, &cfg, run, 0)
    };
    Ok(SpuriousExample {
        baseline: record(Algorithm::Baseline, &base_run),
        convex: record(Algorithm::Convex, &conv_run),
        baseline_path: base_run.trajectory.clone().unwrap_or_default(),
        convex_path: conv_run.trajectory.clone().unwrap_or_default(),
    })
}

#[allow(clippy::too_many_arguments)]
fn solved_record(
    trial_id: u64,
    sigma_db: f64,
    algorithm: Algorithm,
    class: TargetClass,
    true_source: Point2,
    initial: Point2,
    cfg: &SolverConfig,
    run: &SolveResult,
    seed: u64,
) -> TrialRecord {
    let err = run.estimate.distance(true_source);
    TrialRecord {
        trial_id,
        sigma_db,
        algorithm,
        class,
        true_source,
        initial,
        step: cfg.mu,
        estimate: Some(run.estimate),
        sq_error: Some((run.estimate - true_source).norm_squared()),
        iterations: run.iterations,
        converged: run.converged,
        spurious: run.converged && err > 10.0 * cfg.grad_tol,
        seed,
        failure: None,
    }
}

fn classify_by_run(run: std::result::Result<&SolveResult, ()>, target: Point2) -> TargetClass {
    match run {
        Ok(r) if r.estimate.distance(target) <= CLASS_TOLERANCE => TargetClass::GuaranteedLike,
        _ => TargetClass::Unguaranteed,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub sigma_db: f64,
    pub algorithm: Algorithm,
    /// `None` aggregates both classes.
    pub class: Option<TargetClass>,
    pub mean_sq_error: f64,
    pub trial_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub records: Vec<TrialRecord>,
    pub summary: Vec<SummaryRow>,
}

/// Runs every trial of `cfg`. Trials run on the current rayon pool; the
/// output order (trial, then σ, then algorithm) does not depend on it.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let records: Vec<TrialRecord> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let summary = summarize(&records, &cfg.sigma_grid, &cfg.algorithms);
    Ok(SweepResult { records, summary })
}

fn sample_in(rng: &mut ChaCha8Rng, cfg: &SweepConfig) -> Point2 {
    let b = &cfg.sample_box;
    Point2::new(rng.random_range(b.min.x..b.max.x), rng.random_range(b.min.y..b.max.y))
}

struct Outcome {
    cfg: SolverConfig,
    run: Result<SolveResult>,
}

fn solve_one(algorithm: Algorithm, scenario: &Scenario, sweep: &SweepConfig, initial: Point2) -> Outcome {
    let build = || -> Result<(Box<dyn Objective>, SolverConfig)> {
        let convex = ConvexCost::from_scenario(scenario)?;
        let q = convex.quadratic();
        let mu = match algorithm {
            Algorithm::Convex if sweep.auto_step => auto_step(&q, DEFAULT_STEP_SAFETY)?,
            _ => sweep.mu,
        };
        let cfg = SolverConfig {
            mu,
            max_iters: sweep.max_iters,
            grad_tol: default_grad_tol(&q),
            initial,
            record_trajectory: false,
        };
        let cost: Box<dyn Objective> = match algorithm {
            Algorithm::Convex => Box::new(convex),
            Algorithm::Baseline => Box::new(BaselineCost::from_scenario(scenario)?),
        };
        Ok((cost, cfg))
    };
    match build() {
        Ok((cost, cfg)) => Outcome {
            run: descend(cost.as_ref(), &cfg),
            cfg,
        },
        Err(e) => Outcome {
            cfg: SolverConfig::new(sweep.mu, initial),
            run: Err(e),
        },
    }
}

fn run_trial(cfg: &SweepConfig, trial_id: u64) -> Result<Vec<TrialRecord>> {
    let seed = cfg.master_seed ^ trial_id;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(SAMPLING_STREAM);
    let source = sample_in(&mut rng, cfg);
    let initial = sample_in(&mut rng, cfg);
    let model = cfg.rss.model()?;

    let scenario_at = |sigma: f64| -> Result<Scenario> {
        let spec = ShadowingSpec::new(sigma, seed)?.with_samples(cfg.samples_per_estimate)?;
        let ranges = noisy_ranges(&model, &spec, source, &cfg.anchors)?;
        Scenario::new(cfg.anchors.clone(), source, ranges, format!("trial-{trial_id}"))
    };

    // noise-free baseline from the same start decides the class, unless an
    // explicit ellipse is configured
    let reference = scenario_at(0.0).map(|s| solve_one(Algorithm::Baseline, &s, cfg, initial));
    let class = match &cfg.ellipse {
        Some(e) if e.contains(source) => TargetClass::GuaranteedLike,
        Some(_) => TargetClass::Unguaranteed,
        None => match &reference {
            Ok(Outcome { run: Ok(r), .. }) => classify_by_run(Ok(r), source),
            _ => TargetClass::Unguaranteed,
        },
    };

    let mut out = Vec::with_capacity(cfg.sigma_grid.len() * cfg.algorithms.len());
    for &sigma in &cfg.sigma_grid {
        let scenario = scenario_at(sigma);
        for &algorithm in &cfg.algorithms {
            let owned;
            let outcome = match (&scenario, &reference) {
                (Ok(_), Ok(r)) if sigma == 0.0 && algorithm == Algorithm::Baseline => r,
                (Ok(s), _) => {
                    owned = solve_one(algorithm, s, cfg, initial);
                    &owned
                }
                (Err(e), _) => {
                    out.push(failed_record(trial_id, sigma, algorithm, class, source, initial, cfg.mu, 0, seed, e));
                    continue;
                }
            };
            let record = match &outcome.run {
                Ok(run) => solved_record(trial_id, sigma, algorithm, class, source, initial, &outcome.cfg, run, seed),
                Err(e) => {
                    let iterations = match e {
                        crate::error::Error::NonFinite { iteration } => *iteration,
                        _ => 0,
                    };
                    failed_record(trial_id, sigma, algorithm, class, source, initial, outcome.cfg.mu, iterations, seed, e)
                }
            };
            out.push(record);
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn failed_record(
    trial_id: u64,
    sigma_db: f64,
    algorithm: Algorithm,
    class: TargetClass,
    true_source: Point2,
    initial: Point2,
    step: f64,
    iterations: usize,
    seed: u64,
    error: &crate::error::Error,
) -> TrialRecord {
    TrialRecord {
        trial_id,
        sigma_db,
        algorithm,
        class,
        true_source,
        initial,
        step,
        estimate: None,
        sq_error: None,
        iterations,
        converged: false,
        spurious: false,
        seed,
        failure: Some(format!("{}: {}", error.name(), error)),
    }
}

/// Mean and standard error of `sq_error` over successful solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupStats {
    pub mean: f64,
    pub std_error: f64,
    pub count: usize,
    pub failures: usize,
}

pub fn group_stats(
    records: &[TrialRecord],
    sigma_db: f64,
    algorithm: Algorithm,
    class: Option<TargetClass>,
) -> GroupStats {
    let matching = records.iter().filter(|r| {
        r.sigma_db == sigma_db && r.algorithm == algorithm && class.is_none_or(|c| r.class == c)
    });
    let mut failures = 0;
    let errors: Vec<f64> = matching
        .filter_map(|r| {
            if r.sq_error.is_none() {
                failures += 1;
            }
            r.sq_error
        })
        .collect();
    let count = errors.len();
    let mean = errors.iter().sum::<f64>() / count as f64;
    let std_error = if count > 1 {
        let var = errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
        (var / count as f64).sqrt()
    } else {
        0.0
    };
    GroupStats {
        mean,
        std_error,
        count,
        failures,
    }
}

/// Mean squared error per σ, algorithm and class (plus an all-class row).
/// Failed solves are excluded; empty groups are omitted.
pub fn summarize(records: &[TrialRecord], sigma_grid: &[f64], algorithms: &[Algorithm]) -> Vec<SummaryRow> {
    let classes = [Some(TargetClass::GuaranteedLike), Some(TargetClass::Unguaranteed), None];
    let mut rows = Vec::new();
    for &sigma_db in sigma_grid {
        for &algorithm in algorithms {
            for class in classes {
                let stats = group_stats(records, sigma_db, algorithm, class);
                if stats.count > 0 {
                    rows.push(SummaryRow {
                        sigma_db,
                        algorithm,
                        class,
                        mean_sq_error: stats.mean,
                        trial_count: stats.count,
                    });
                }
            }
        }
    }
    rows
}
