use std::path::PathBuf;

use clap::Args;
use hhlbnn_core::sampling::{run_sweep, write_sweep_csv, DistributionKind, SamplingOptions, SearchStrategy};

use super::Common;
use crate::config::ConfigFile;
use crate::error::CliResult;
use crate::output::sink;

#[derive(Debug, Args)]
pub struct SamplingArgs {
    /// Distribution kinds: random, uniform
    #[arg(long, value_delimiter = ',')]
    pub kinds: Option<Vec<DistributionKind>>,
    /// Numbers of outcomes, each in [2, 32]
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// L1 targets
    #[arg(long, value_delimiter = ',')]
    pub epsilons: Option<Vec<f64>>,
    /// Independent trials per grid cell
    #[arg(long)]
    pub trials: Option<usize>,
    /// Per-trial search: prefix-path or doubling-bisection
    #[arg(long)]
    pub strategy: Option<SearchStrategy>,
    /// Per-trial cap on the shot count
    #[arg(long)]
    pub max_samples: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

pub fn run(args: SamplingArgs) -> CliResult<()> {
    let mut cfg = ConfigFile::load(args.common.config.as_deref())?;
    let kinds = cfg.pick_list(
        args.kinds,
        "kinds",
        vec![DistributionKind::Random, DistributionKind::Uniform],
    )?;
    let sizes = cfg.pick_list(args.sizes, "sizes", vec![2, 4, 8, 16, 32])?;
    let epsilons = cfg.pick_list(args.epsilons, "epsilons", vec![0.02, 0.05])?;
    let trials = cfg.pick(args.trials, "trials", 20)?;
    let defaults = SamplingOptions::default();
    let strategy = cfg.pick(args.strategy, "strategy", defaults.strategy)?;
    let max_samples = cfg.pick(args.max_samples, "max-samples", defaults.max_samples)?;
    let seed = cfg.pick(args.common.seed, "seed", 0)?;
    let out: Option<PathBuf> = cfg.pick_opt(args.common.out, "out")?;
    cfg.finish()?;

    let options = SamplingOptions { strategy, max_samples };
    let rows = run_sweep(&kinds, &sizes, &epsilons, trials, seed, &options)?;
    if let Some(note) = rows.iter().find_map(|r| r.note()) {
        eprintln!("note (uniform rows): {note}");
    }
    write_sweep_csv(&rows, sink(out.as_deref())?)?;
    Ok(())
}
