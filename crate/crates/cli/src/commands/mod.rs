pub mod experiment;
pub mod hhl;
pub mod pipeline;
pub mod sampling;
pub mod swap;

use std::path::PathBuf;

use clap::Args;

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Master seed; every stochastic quantity derives from it
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for parallel trials and runs
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat key = value file; explicit flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
}
