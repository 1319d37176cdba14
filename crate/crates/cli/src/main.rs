mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{experiment, hhl, pipeline, sampling, swap};
use error::CliError;

/// Statevector HHL and SWAP-test simulation with Hamming-constrained binary
/// network training.
#[derive(Debug, Parser)]
#[command(name = "hhlbnn", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a linear system with simulated HHL and compare to the dense solver
    Hhl(hhl::HhlArgs),
    /// Run a SWAP test (or a chained pair) between prepared states
    Swap(swap::SwapArgs),
    /// Shots needed to reconstruct random and uniform distributions
    Sampling(sampling::SamplingArgs),
    /// Paired baseline and constrained training runs on MNIST
    Experiment(experiment::ExperimentArgs),
    /// HHL, SWAP tests and constrained search on a toy regression
    Pipeline(pipeline::PipelineArgs),
}

fn jobs(command: &Command) -> Option<usize> {
    match command {
        Command::Hhl(a) => a.common.jobs,
        Command::Swap(a) => a.common.jobs,
        Command::Sampling(a) => a.common.jobs,
        Command::Experiment(a) => a.common.jobs,
        Command::Pipeline(a) => a.common.jobs,
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = jobs(&cli.command) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    match cli.command {
        Command::Hhl(a) => hhl::run(a),
        Command::Swap(a) => swap::run(a),
        Command::Sampling(a) => sampling::run(a),
        Command::Experiment(a) => experiment::run(a),
        Command::Pipeline(a) => pipeline::run(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hhlbnn: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
