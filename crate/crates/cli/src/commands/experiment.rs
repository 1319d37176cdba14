use std::path::PathBuf;

use clap::Args;
use hhlbnn_core::bnn::TrainConfig;
use hhlbnn_core::data::{self, MnistPart, DATA_DIR_ENV};
use hhlbnn_core::experiment::{run_experiment, summarize, write_runs_csv, ExperimentConfig};
use hhlbnn_core::rng::derive_seed;

use super::Common;
use crate::config::ConfigFile;
use crate::error::{CliError, CliResult};
use crate::output::{sink, write_json};

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Directory holding train-{images-idx3,labels-idx1}-ubyte[.gz]
    #[arg(long, env = DATA_DIR_ENV)]
    pub data_dir: Option<PathBuf>,
    /// Number of paired runs
    #[arg(long)]
    pub runs: Option<usize>,
    /// Validation samples (default: a tenth of the data)
    #[arg(long)]
    pub val_size: Option<usize>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    pub patience: Option<usize>,
    /// Forward scale (default 1/D)
    #[arg(long)]
    pub output_scale: Option<f64>,
    /// Summary JSON path (stdout when --out is given, else stderr)
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Exit 4 unless the constrained arm is faster with an improvement
    /// ratio in [0.15, 0.50] and at least 55% equal-or-better runs
    #[arg(long)]
    pub check: bool,
    #[command(flatten)]
    pub common: Common,
}

pub fn run(args: ExperimentArgs) -> CliResult<()> {
    let mut cfg = ConfigFile::load(args.common.config.as_deref())?;
    let data_dir: Option<PathBuf> = cfg.pick_opt(args.data_dir, "data-dir")?;
    let runs = cfg.pick(args.runs, "runs", 100)?;
    let val_size: Option<usize> = cfg.pick_opt(args.val_size, "val-size")?;
    let defaults = TrainConfig::default();
    let learning_rate = cfg.pick(args.learning_rate, "learning-rate", defaults.learning_rate)?;
    let max_iterations = cfg.pick(args.max_iterations, "max-iterations", defaults.max_iterations)?;
    let patience = cfg.pick(args.patience, "patience", defaults.patience)?;
    let output_scale = cfg.pick_opt(args.output_scale, "output-scale")?;
    let summary_path: Option<PathBuf> = cfg.pick_opt(args.summary, "summary")?;
    let check = cfg.pick_flag(args.check, "check")?;
    let seed = cfg.pick(args.common.seed, "seed", 0)?;
    let out: Option<PathBuf> = cfg.pick_opt(args.common.out, "out")?;
    cfg.finish()?;

    let dir = data::resolve_data_dir(data_dir.as_deref())
        .ok_or_else(|| CliError::Input(format!("no data directory: pass --data-dir or set {DATA_DIR_ENV}")))?;
    let dataset = data::load_mnist(&dir, MnistPart::Train)?;
    let val_size = val_size.unwrap_or(dataset.len() / 10);
    let (train_set, validation) = data::split(&dataset, val_size, derive_seed(seed, u64::MAX))?;
    eprintln!(
        "loaded {} samples from {} ({} train, {} validation)",
        dataset.len(),
        dir.display(),
        train_set.len(),
        validation.len()
    );

    let config = ExperimentConfig {
        runs,
        train: TrainConfig {
            learning_rate,
            max_iterations,
            patience,
            seed,
            output_scale,
        },
        seed,
        jobs: None,
    };
    let results = run_experiment(&train_set, &validation, &config)?;
    write_runs_csv(&results, sink(out.as_deref())?)?;
    let summary = summarize(&results, &config);
    match (&summary_path, &out) {
        (Some(p), _) => write_json(&summary, Some(p))?,
        (None, Some(_)) => write_json(&summary, None)?,
        (None, None) => eprintln!("{}", serde_json::to_string_pretty(&summary)?),
    }
    if check {
        let ok = summary.mean_constrained < summary.mean_baseline
            && (0.15..=0.50).contains(&summary.improvement_ratio)
            && summary.frac_equal_or_better >= 0.55;
        if !ok {
            return Err(CliError::Threshold(format!(
                "improvement ratio {:.3}, equal-or-better {:.2}",
                summary.improvement_ratio, summary.frac_equal_or_better
            )));
        }
    }
    Ok(())
}
