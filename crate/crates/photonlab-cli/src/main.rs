//! Command-line front end: likelihood tables, precision sweeps, and
//! measurement-scheme comparisons as CSV, with a checksummed manifest.

mod commands;
mod config;
mod csvio;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{ArgAction, Parser, Subcommand};

use config::{LossMode, RunConfig};

#[derive(Parser)]
#[command(
    name = "photonlab",
    version,
    about = "Two-arm interferometry simulation and Bayesian phase estimation",
    after_help = "Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.\n\
                  PHOTONLAB_THREADS caps the worker-thread count; results do not depend on it."
)]
struct Cli {
    /// Key = value configuration file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Comma-separated input states (noon6, mm51, mm42, hb6, noon:<N>,
    /// mm:<m>:<m'>, hb:<N>).
    #[arg(long, global = true)]
    state: Option<String>,

    /// Lower-arm transmissivity.
    #[arg(long, global = true)]
    t0: Option<f64>,

    /// Upper-arm transmissivity.
    #[arg(long, global = true)]
    t1: Option<f64>,

    /// True phase; defaults to the per-state operating point.
    #[arg(long, global = true)]
    phi_star: Option<f64>,

    /// Detection events folded into each posterior.
    #[arg(long, global = true)]
    nr: Option<usize>,

    /// Experiment repetitions averaged per cell.
    #[arg(long, global = true)]
    experiments: Option<usize>,

    /// Circuit shots per likelihood grid point.
    #[arg(long, global = true)]
    shots: Option<u64>,

    /// Likelihood grid points over [0, 2 pi).
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Posterior grid points over the phase window.
    #[arg(long, global = true)]
    posterior_points: Option<usize>,

    /// Master RNG seed; reruns with the same seed are byte-identical.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Use exact oracle likelihood tables (default).
    #[arg(long, global = true, action = ArgAction::SetTrue, conflicts_with = "sampled")]
    exact: bool,

    /// Use circuit-sampled likelihood tables instead of exact ones.
    #[arg(long, global = true, action = ArgAction::SetTrue)]
    sampled: bool,

    /// Comma-separated transmissivity grid for sweeps.
    #[arg(long, global = true)]
    t_grid: Option<String>,

    /// Sweep direction: symmetric (t0 = t1) or asymmetric (t0 = 1).
    #[arg(long, global = true)]
    loss: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit sampled, fitted, and exact likelihood curves per detection event.
    Likelihood,
    /// Sweep loss settings: averaged precision, Fisher information, bounds.
    Sweep,
    /// Compare photon counting, parity, and the exchange observable.
    CompareSchemes,
}

fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = &cli.state {
        cfg.set("state", v)?;
    }
    if let Some(v) = cli.t0 {
        cfg.t0 = v;
    }
    if let Some(v) = cli.t1 {
        cfg.t1 = v;
    }
    if let Some(v) = cli.phi_star {
        cfg.phi_star = Some(v);
    }
    if let Some(v) = cli.nr {
        cfg.n_r = v;
    }
    if let Some(v) = cli.experiments {
        cfg.experiments = v;
    }
    if let Some(v) = cli.shots {
        cfg.shots = v;
    }
    if let Some(v) = cli.grid {
        cfg.grid = v;
    }
    if let Some(v) = cli.posterior_points {
        cfg.posterior_points = v;
    }
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    if let Some(v) = &cli.out {
        cfg.out = v.clone();
    }
    if cli.exact {
        cfg.exact = true;
    }
    if cli.sampled {
        cfg.exact = false;
    }
    if let Some(v) = &cli.t_grid {
        cfg.set("t_grid", v)?;
    }
    if let Some(v) = &cli.loss {
        cfg.loss_mode = v.parse::<LossMode>()?;
    }
    Ok(cfg)
}

/// 2 for configuration problems, 3 for numerical failures, 4 for I/O.
fn exit_code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(lib) = cause.downcast_ref::<photonlab::Error>() {
            return match lib {
                photonlab::Error::PosteriorUnderflow | photonlab::Error::EigenFailed => 3,
                _ => 2,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 4;
        }
        if cause.downcast_ref::<csv::Error>().is_some() {
            return 4;
        }
    }
    2
}

fn run(cli: &Cli) -> Result<()> {
    if let Ok(threads) = std::env::var("PHOTONLAB_THREADS") {
        let threads: usize = threads
            .parse()
            .map_err(|_| anyhow::anyhow!("PHOTONLAB_THREADS must be a positive integer"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    let cfg = resolve_config(cli)?;
    match cli.command {
        Command::Likelihood => commands::likelihood(&cfg),
        Command::Sweep => commands::sweep(&cfg),
        Command::CompareSchemes => commands::compare_schemes(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
