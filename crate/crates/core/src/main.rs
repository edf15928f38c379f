use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use radloc::costs::{BaselineCost, ConvexCost, Objective};
use radloc::geometry::sequential_axes;
use radloc::harness::output::write_text;
use radloc::harness::{
    run_example_spurious_with, run_sweep, write_records, write_summary, write_trajectory, Algorithm,
    ScenarioFile, SweepConfig, SCHEMA_VERSION,
};
use radloc::solver::{auto_step, default_grad_tol, descend, SolverConfig, DEFAULT_MAX_ITERS, DEFAULT_MU, DEFAULT_STEP_SAFETY};
use radloc::Error;

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (config schema 1)");

#[derive(Debug, Parser)]
#[command(name = "radloc", version = VERSION, about = "Radical-axis range localization toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone, Default)]
struct Overrides {
    /// Master / noise seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for CSV files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Step size override.
    #[arg(long)]
    mu: Option<f64>,
    /// Iteration cap override.
    #[arg(long = "max-iters")]
    max_iters: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Localize one scenario from a TOML file.
    Solve {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Reproduce a fixed experiment.
    Repro {
        #[command(subcommand)]
        which: Repro,
    },
    /// Monte Carlo shadowing sweep (built-in four-anchor setup when no file is given).
    Sweep {
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
        /// Override the number of trials.
        #[arg(long)]
        trials: Option<u64>,
        /// Worker threads (default: all cores). Output does not depend on it.
        #[arg(long)]
        threads: Option<usize>,
        /// Per-trial step 0.9·2/λ_max for the convex algorithm.
        #[arg(long)]
        auto_step: bool,
    },
    /// Print the sequential radical axes of a scenario.
    Axes { config: PathBuf },
}

#[derive(Debug, Subcommand)]
enum Repro {
    /// Spurious stationary point of the squared-range cost, both algorithms from [3, 2].
    Spurious {
        #[command(flatten)]
        overrides: Overrides,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is_usage() => {
            eprintln!("usage error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> radloc::Result<()> {
    match command {
        Command::Solve { config, overrides } => solve(&config, &overrides),
        Command::Repro {
            which: Repro::Spurious { overrides },
        } => repro_spurious(&overrides),
        Command::Sweep {
            config,
            overrides,
            trials,
            threads,
            auto_step,
        } => sweep(config.as_deref(), &overrides, trials, threads, auto_step),
        Command::Axes { config } => axes(&config),
    }
}

fn ensure_dir(dir: &Path) -> radloc::Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn solve(path: &Path, o: &Overrides) -> radloc::Result<()> {
    let mut file = ScenarioFile::load(path)?;
    if let (Some(seed), Some(noise)) = (o.seed, file.noise.as_mut()) {
        noise.seed = seed;
    }
    let scenario = file.scenario()?;
    let convex = ConvexCost::from_scenario(&scenario)?;
    let q = convex.quadratic();
    if file.algorithm == Algorithm::Convex && q.is_singular() {
        return Err(Error::CollinearAnchors);
    }
    let mu = match (o.mu, file.auto_step) {
        (Some(mu), _) => mu,
        (None, true) if file.algorithm == Algorithm::Convex => auto_step(&q, DEFAULT_STEP_SAFETY)?,
        _ => file.mu,
    };
    let mut cfg = SolverConfig::for_quadratic(&q, mu, file.initial).with_max_iters(o.max_iters.unwrap_or(file.max_iters));
    if let Some(tol) = file.grad_tol {
        cfg = cfg.with_grad_tol(tol);
    }
    if o.out.is_some() {
        cfg = cfg.recording();
    }
    let cost: Box<dyn Objective> = match file.algorithm {
        Algorithm::Convex => Box::new(convex),
        Algorithm::Baseline => {
            let sq = file
                .exact_squared_ranges()
                .map(<[f64]>::to_vec)
                .unwrap_or_else(|| scenario.squared_ranges());
            let n = scenario.anchors().len();
            let weights = file.weights.clone().unwrap_or_else(|| vec![1.0; n]);
            Box::new(BaselineCost::new(scenario.anchors().to_vec(), sq, weights)?)
        }
    };
    let res = descend(cost.as_ref(), &cfg)?;
    println!("algorithm  {}", file.algorithm);
    println!("estimate   {} {}", res.estimate.x, res.estimate.y);
    println!("source     {} {}", scenario.source().x, scenario.source().y);
    println!("error      {}", res.estimate.distance(scenario.source()));
    println!("iterations {}", res.iterations);
    println!("converged  {}", res.converged);
    println!("step       {}", cfg.mu);
    if let (Some(dir), Some(t)) = (&o.out, &res.trajectory) {
        ensure_dir(dir)?;
        write_trajectory(&dir.join("trajectory.csv"), t)?;
    }
    Ok(())
}

fn repro_spurious(o: &Overrides) -> radloc::Result<()> {
    let ex = run_example_spurious_with(o.mu.unwrap_or(DEFAULT_MU), o.max_iters.unwrap_or(DEFAULT_MAX_ITERS))?;
    for r in ex.records() {
        let e = r.estimate.expect("noise-free example always solves");
        println!(
            "{:<8} estimate {} {}  iterations {}  converged {}  spurious {}",
            r.algorithm, e.x, e.y, r.iterations, r.converged, r.spurious
        );
    }
    if let Some(dir) = &o.out {
        ensure_dir(dir)?;
        write_trajectory(&dir.join("baseline_trajectory.csv"), &ex.baseline_path)?;
        write_trajectory(&dir.join("convex_trajectory.csv"), &ex.convex_path)?;
        write_records(&dir.join("records.csv"), &ex.records())?;
    }
    Ok(())
}

fn sweep(
    path: Option<&Path>,
    o: &Overrides,
    trials: Option<u64>,
    threads: Option<usize>,
    auto: bool,
) -> radloc::Result<()> {
    let mut cfg = match path {
        Some(p) => SweepConfig::load(p)?,
        None => SweepConfig::shadowing_example(),
    };
    if let Some(seed) = o.seed {
        cfg.master_seed = seed;
    }
    if let Some(mu) = o.mu {
        cfg.mu = mu;
    }
    if let Some(m) = o.max_iters {
        cfg.max_iters = m;
    }
    if let Some(t) = trials {
        cfg.trials = t;
    }
    cfg.auto_step |= auto;
    cfg.validate()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let result = pool.install(|| run_sweep(&cfg))?;

    println!("sigma_db  algorithm  class            mean_sq_error  trials");
    for row in &result.summary {
        println!(
            "{:<9} {:<10} {:<16} {:<14.6e} {}",
            row.sigma_db,
            row.algorithm,
            row.class.map_or("all", |c| c.as_str()),
            row.mean_sq_error,
            row.trial_count
        );
    }
    let failures = result.records.iter().filter(|r| r.failure.is_some()).count();
    if failures > 0 {
        println!("failed solves: {failures}");
    }
    if let Some(dir) = &o.out {
        ensure_dir(dir)?;
        write_records(&dir.join("records.csv"), &result.records)?;
        write_summary(&dir.join("summary.csv"), &result.summary)?;
        write_text(
            &dir.join("sweep.toml"),
            &format!("# schema {SCHEMA_VERSION}\n{}", cfg.to_toml()),
        )?;
    }
    Ok(())
}

fn axes(path: &Path) -> radloc::Result<()> {
    let file = ScenarioFile::load(path)?;
    let scenario = file.scenario()?;
    let axes = sequential_axes(&scenario)?;
    println!("pair  foot_x  foot_y  dir_x  dir_y");
    for (k, a) in axes.iter().enumerate() {
        println!(
            "{}-{}  {}  {}  {}  {}",
            k + 1,
            k + 2,
            a.foot().x,
            a.foot().y,
            a.direction().x,
            a.direction().y
        );
    }
    let q = ConvexCost::new(axes)?.quadratic();
    println!("hessian [[{}, {}], [{}, {}]]", q.hessian[0][0], q.hessian[0][1], q.hessian[1][0], q.hessian[1][1]);
    println!("rhs     [{}, {}]", q.rhs.x, q.rhs.y);
    println!("grad_tol {}", default_grad_tol(&q));
    Ok(())
}
