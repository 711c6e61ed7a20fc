//! `chanlab`: bound reports, Poiseuille checks, simulations and sweeps.
//!
//! Exit codes: 0 success, 1 a simulation diverged, 2 usage or config error.
//! `CHANLAB_THREADS` sets the worker-thread count.

mod error;
mod params_args;
mod report;
mod simulate;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use error::{CliError, Result, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(name = "chanlab", version, about = "Channel-flow bounds laboratory")]
struct Cli {
    /// Worker threads for the data-parallel kernels and sweeps.
    #[arg(long, global = true, env = "CHANLAB_THREADS")]
    threads: Option<usize>,
    /// Run every kernel on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// All closed-form bounds for one parameter set, with Poiseuille checks.
    BoundsReport(report::BoundsArgs),
    /// Plane Poiseuille quantities, closed form against quadrature.
    PoiseuilleCheck(report::PoiseuilleArgs),
    /// Run one simulation config.
    Simulate(simulate::SimulateArgs),
    /// Run a config over a list of pressures or Reynolds numbers.
    Sweep(simulate::SweepArgs),
    /// Forcing spectrum and shell injections on the odd Stokes modes.
    InjectionSpectrum(report::SpectrumArgs),
}

/// Full double precision: 17 significant digits.
pub(crate) fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn open_output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            Box::new(BufWriter::new(File::create(p)?))
        }
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn configure_threads(threads: Option<usize>) -> Result<()> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err(error::usage("thread count must be at least 1"));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| error::usage(e.to_string()))?;
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<()> {
    configure_threads(cli.threads)?;
    let go = || match &cli.command {
        Command::BoundsReport(a) => report::bounds_report(a),
        Command::PoiseuilleCheck(a) => report::poiseuille_check(a),
        Command::Simulate(a) => simulate::simulate(a),
        Command::Sweep(a) => simulate::sweep(a, cli.sequential),
        Command::InjectionSpectrum(a) => report::injection_spectrum(a),
    };
    if cli.sequential {
        chanlab_core::par::with_sequential(go)
    } else {
        go()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = match e {
                CliError::Usage(_) => "error",
                CliError::Diverged(_) => "diverged",
            };
            eprintln!("chanlab: {kind}: {e}");
            ExitCode::from(e.code())
        }
    }
}
