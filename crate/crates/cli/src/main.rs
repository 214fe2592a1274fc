//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a verification suite
//! found violations, 3 a requested radius overflows the exact enumeration.

mod cmds;
mod config;
mod output;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use modcount_core::Error;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "modcount",
    version,
    about = "Counts modular-group elements, orbit points, and conjugacy classes in hyperbolic balls"
)]
struct Cli {
    /// key=value config file; the MODCOUNT_CONFIG variable is honored when
    /// this flag is absent
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count elements and orbit points in one ball
    Ball(cmds::BallArgs),
    /// Per-radius element/orbit counts with class fractions
    Census(cmds::CensusArgs),
    /// Conjugacy-class counts around a probe pair
    Conj(cmds::ConjArgs),
    /// Run an invariant suite; violations exit with code 2
    Verify(cmds::VerifyArgs),
    /// Fit a growth exponent to an exported CSV
    Fit(cmds::FitArgs),
    /// Evaluate the two-sided growth-bound constants
    Constants(cmds::ConstantsArgs),
    /// Calibrate the contraction constant by sampling
    Calibrate(cmds::CalibrateArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Overflow(_) => 3,
                _ => 1,
            })
        }
    }
}

fn run(cli: &Cli) -> modcount_core::Result<u8> {
    let cfg = config::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Ball(a) => cmds::cmd_ball(&cfg, a),
        Command::Census(a) => cmds::cmd_census(&cfg, a),
        Command::Conj(a) => cmds::cmd_conj(&cfg, a),
        Command::Verify(a) => cmds::cmd_verify(a),
        Command::Fit(a) => cmds::cmd_fit(a),
        Command::Constants(a) => cmds::cmd_constants(a),
        Command::Calibrate(a) => cmds::cmd_calibrate(a),
    }
}
