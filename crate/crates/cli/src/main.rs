//! `analyticity`: lemma verification, Neumann probes, flow runs with radius
//! tracking and bound probes.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{euler, lemmas, neumann, probes, radius, shear};

/// Environment variable holding the worker count of the thread pool.
const WORKERS_ENV: &str = "GEVREY_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "analyticity", version, about, arg_required_else_help = true)]
struct Cli {
    /// Directory for CSV, snapshots and the run manifest.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// TOML file with one table per subcommand; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exhaustive checks of the multi-index lemmas.
    VerifyLemmas(lemmas::Args),
    /// Solve the slab Neumann problem and probe its estimates.
    SolveNeumann(neumann::Args),
    /// Evolve 2D Euler and measure the radius along the run.
    RunEuler(euler::Args),
    /// Sample the explicit shear flow on a time grid.
    RunShear(shear::Args),
    /// Radius ODE, closed form and lower bound for a recorded trajectory.
    TrackRadius(radius::Args),
    /// Implied constants of the commutator and pressure estimates.
    ProbeBounds(probes::Args),
}

fn init_workers() -> anyhow::Result<()> {
    if let Ok(raw) = std::env::var(WORKERS_ENV) {
        let n: usize = raw.parse().map_err(|_| anyhow::anyhow!("{WORKERS_ENV}={raw} is not a worker count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    init_workers()?;
    let file = config::ConfigFile::load(cli.config.as_deref())?;
    std::fs::create_dir_all(&cli.out)?;
    match cli.command {
        Command::VerifyLemmas(a) => lemmas::run(config::resolve(a, &file, "verify-lemmas")?, &cli.out),
        Command::SolveNeumann(a) => neumann::run(config::resolve(a, &file, "solve-neumann")?, &cli.out),
        Command::RunEuler(a) => euler::run(config::resolve(a, &file, "run-euler")?, &cli.out),
        Command::RunShear(a) => shear::run(config::resolve(a, &file, "run-shear")?, &cli.out),
        Command::TrackRadius(a) => radius::run(config::resolve(a, &file, "track-radius")?, &cli.out),
        Command::ProbeBounds(a) => probes::run(config::resolve(a, &file, "probe-bounds")?, &cli.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<config::UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
