use std::path::PathBuf;

use clap::Args;
use hhlbnn_core::binary::BinaryVector;
use hhlbnn_core::pipeline::{run_pipeline, PipelineConfig};

use super::Common;
use crate::config::ConfigFile;
use crate::error::{CliError, CliResult};
use crate::output::write_json;

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Number of weights (a power of two)
    #[arg(long)]
    pub weights: Option<usize>,
    #[arg(long)]
    pub clock_qubits: Option<usize>,
    /// SWAP-test shots; 0 uses exact probabilities
    #[arg(long)]
    pub shots: Option<u64>,
    /// Reference mask for the distance test, e.g. 1010
    #[arg(long)]
    pub mask: Option<BinaryVector>,
    /// Binary solution of the toy problem, e.g. 1011
    #[arg(long)]
    pub solution: Option<BinaryVector>,
    /// Search radii h-1..=h+1 instead of exactly h
    #[arg(long)]
    pub widen_radius: bool,
    /// Minimum HHL fidelity before the classical stages run
    #[arg(long)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

pub fn run(args: PipelineArgs) -> CliResult<()> {
    let mut cfg = ConfigFile::load(args.common.config.as_deref())?;
    let defaults = PipelineConfig::default();
    let config = PipelineConfig {
        n_weights: cfg.pick(args.weights, "weights", defaults.n_weights)?,
        clock_qubits: cfg.pick(args.clock_qubits, "clock-qubits", defaults.clock_qubits)?,
        shots: cfg.pick(args.shots, "shots", defaults.shots)?,
        seed: cfg.pick(args.common.seed, "seed", 0)?,
        fidelity_threshold: cfg.pick(args.threshold, "threshold", defaults.fidelity_threshold)?,
        test_mask: cfg.pick_opt(args.mask, "mask")?,
        solution: cfg.pick_opt(args.solution, "solution")?,
        widen_radius: cfg.pick_flag(args.widen_radius, "widen-radius")?,
    };
    let out: Option<PathBuf> = cfg.pick_opt(args.common.out, "out")?;
    cfg.finish()?;

    let trace = run_pipeline(&config)?;
    write_json(&trace, out.as_deref())?;
    if !trace.recovered_exactly {
        return Err(CliError::Threshold(format!(
            "recovered {} but the solution is {}",
            trace.search.recovered, trace.problem.solution
        )));
    }
    Ok(())
}
