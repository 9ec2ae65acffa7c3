//! `superpose` — sweeps, proposition checks, amplitude optimization and
//! quantum-walk runs from a JSON config plus flag overrides.
//!
//! Exit codes: 0 success, 1 failed verification or I/O error, 2 bad config or
//! arguments, 3 scenario error.

mod commands;
mod config;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{RunConfig, ScenarioRef};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Scenario(superpose::Error),
    Io(String),
}

impl From<superpose::Error> for CliError {
    fn from(e: superpose::Error) -> Self {
        CliError::Scenario(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Scenario(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Scenario(e) => write!(f, "scenario error: {e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "superpose", version, about = "Superposed noisy channels: sweeps, checks and optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity and concurrence along a 1-D noise sweep, as CSV.
    Sweep(RunArgs),
    /// Fidelity and concurrence over a (p, q) grid, as CSV.
    Grid(RunArgs),
    /// Check every registered claim and print a pass/fail table.
    Verify,
    /// Search for vacuum amplitudes maximizing fidelity at one (p, q), as JSON.
    Optimize(RunArgs),
    /// Per-step position distributions of a coined walk on a cycle, as CSV.
    Walk(RunArgs),
}

#[derive(Args, Clone, Debug, Default)]
struct RunArgs {
    /// JSON run config; omitted fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Builtin scenario name (overrides the config's scenario).
    #[arg(long)]
    scenario: Option<String>,
    /// sweep: evaluate this p only; optimize: noise strength p.
    #[arg(long)]
    p: Option<f64>,
    /// sweep: hold q fixed instead of locking it to p; optimize: noise strength q.
    #[arg(long)]
    q: Option<f64>,
    /// Grid points per axis.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (standard output if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// walk: number of steps.
    #[arg(long)]
    steps: Option<usize>,
    /// walk: number of sites on the cycle.
    #[arg(long)]
    positions: Option<usize>,
    /// Print the resolved config as JSON and exit without running.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Sweep,
    Grid,
    Optimize,
    Walk,
}

fn resolve(args: &RunArgs, mode: Mode) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(name) = &args.scenario {
        cfg.scenario = ScenarioRef::Builtin(name.clone());
    }
    if let Some(n) = args.points {
        cfg.sweep.points = Some(n);
        if let Some(q) = cfg.q_axis.as_mut() {
            q.points = Some(n);
        }
    }
    match mode {
        Mode::Optimize => {
            if let Some(p) = args.p {
                cfg.optimize.p = p;
            }
            if let Some(q) = args.q {
                cfg.optimize.q = q;
            }
        }
        _ => {
            if let Some(p) = args.p {
                cfg.sweep.start = p;
                cfg.sweep.stop = p;
                cfg.sweep.points = Some(1);
            }
            if let Some(q) = args.q {
                cfg.lock_q_to_p = false;
                cfg.fixed_q = Some(q);
            }
        }
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    if let Some(steps) = args.steps {
        cfg.walk.steps = steps;
    }
    if let Some(positions) = args.positions {
        cfg.walk.positions = positions;
    }
    // pin the command's default density so the dumped config reproduces the run
    if cfg.sweep.points.is_none() {
        cfg.sweep.points = Some(match mode {
            Mode::Grid => config::GRID_POINTS,
            _ => config::SWEEP_POINTS,
        });
    }
    if mode == Mode::Grid && cfg.q_axis.is_none() {
        cfg.q_axis = Some(cfg.sweep.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn limit_threads() {
    if let Some(n) = std::env::var("THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // fails only if a pool already exists, which cannot happen this early
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let (args, mode) = match cli.command {
        Command::Verify => {
            return Ok(if commands::cmd_verify()? {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Sweep(a) => (a, Mode::Sweep),
        Command::Grid(a) => (a, Mode::Grid),
        Command::Optimize(a) => (a, Mode::Optimize),
        Command::Walk(a) => (a, Mode::Walk),
    };
    let cfg = resolve(&args, mode)?;
    if args.dump_config {
        println!("{}", serde_json::to_string_pretty(&cfg).expect("config serializes"));
        return Ok(ExitCode::SUCCESS);
    }
    match mode {
        Mode::Sweep => commands::cmd_sweep(&cfg)?,
        Mode::Grid => commands::cmd_grid(&cfg)?,
        Mode::Optimize => commands::cmd_optimize(&cfg)?,
        Mode::Walk => commands::cmd_walk(&cfg)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    limit_threads();
    // clap exits with status 2 on argument errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("superpose: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
