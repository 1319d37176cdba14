use std::str::FromStr;

use clap::{Args, ValueEnum};
use hhlbnn_core::binary::BinaryVector;
use hhlbnn_core::overlap::{
    chained_swap_test, overlap_to_distance, prepare_test_state, swap_test, ChainVariant, OverlapEstimate,
    TestStateSpec,
};
use hhlbnn_core::rng::derive_seed;
use hhlbnn_core::QuantumState;
use serde::Serialize;

use super::Common;
use crate::config::ConfigFile;
use crate::error::{CliError, CliResult};
use crate::output::write_json;

/// A state given on the command line.
///
/// `uniform:N` is the full uniform state on N qubits, `mask:1011` (or just
/// `1011`) the uniform superposition over the set bits, and
/// `amp:0.6,0.8` an explicit real amplitude vector (normalized on load).
#[derive(Debug, Clone, PartialEq)]
pub enum StateArg {
    Uniform(usize),
    Mask(BinaryVector),
    Amplitudes(Vec<f64>),
}

impl FromStr for StateArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some(n) = s.strip_prefix("uniform:") {
            return n.parse().map(StateArg::Uniform).map_err(|e| format!("{s}: {e}"));
        }
        if let Some(v) = s.strip_prefix("amp:") {
            return v
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map(StateArg::Amplitudes)
                .map_err(|e| format!("{s}: {e}"));
        }
        let bits = s.strip_prefix("mask:").unwrap_or(s);
        BinaryVector::parse(bits).map(StateArg::Mask).map_err(|e| format!("{s}: {e}"))
    }
}

impl StateArg {
    fn prepare(&self) -> CliResult<QuantumState> {
        Ok(match self {
            StateArg::Uniform(n) => prepare_test_state(&TestStateSpec::FullUniform { n_qubits: *n })?,
            StateArg::Mask(m) => prepare_test_state(&TestStateSpec::UniformOverMask { mask: m.clone() })?,
            StateArg::Amplitudes(v) => QuantumState::from_real_vector(v)?,
        })
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Variant {
    Fanout,
    Chain,
}

#[derive(Debug, Args)]
pub struct SwapArgs {
    /// First register state
    #[arg(long)]
    pub a: Option<StateArg>,
    /// Second register state
    #[arg(long)]
    pub b: Option<StateArg>,
    /// Third register state; runs the chained test
    #[arg(long)]
    pub c: Option<StateArg>,
    /// Chained-test wiring
    #[arg(long, value_enum)]
    pub variant: Option<Variant>,
    /// Ancilla shots; 0 reports exact probabilities
    #[arg(long)]
    pub shots: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Serialize)]
struct Estimate {
    p0_hat: f64,
    overlap_sq: f64,
    distance_sq: f64,
    std_error: f64,
    shots: u64,
    exact_p0: f64,
}

impl Estimate {
    fn new(est: &OverlapEstimate, exact_p0: f64) -> Self {
        Estimate {
            p0_hat: est.p0_hat,
            overlap_sq: est.overlap_sq,
            distance_sq: overlap_to_distance(est),
            std_error: est.std_error,
            shots: est.shots,
            exact_p0,
        }
    }
}

#[derive(Serialize)]
struct SwapReport {
    seed: u64,
    #[serde(flatten)]
    estimate: Estimate,
}

#[derive(Serialize)]
struct ChainedReport {
    seed: u64,
    variant: &'static str,
    first: Estimate,
    second: Estimate,
}

pub fn run(args: SwapArgs) -> CliResult<()> {
    let mut cfg = ConfigFile::load(args.common.config.as_deref())?;
    let a: Option<StateArg> = cfg.pick_opt(args.a, "a")?;
    let b: Option<StateArg> = cfg.pick_opt(args.b, "b")?;
    let c: Option<StateArg> = cfg.pick_opt(args.c, "c")?;
    let variant_text: Option<String> = cfg.take("variant")?;
    let shots = cfg.pick(args.shots, "shots", 0)?;
    let seed = cfg.pick(args.common.seed, "seed", 0)?;
    let out: Option<std::path::PathBuf> = cfg.pick_opt(args.common.out, "out")?;
    cfg.finish()?;
    let variant = match (args.variant, variant_text.as_deref()) {
        (Some(v), _) => v,
        (None, None) => Variant::Fanout,
        (None, Some(t)) => Variant::from_str(t, true).map_err(|e| CliError::Input(format!("variant: {e}")))?,
    };

    let a = a.ok_or_else(|| CliError::Input("--a is required".into()))?.prepare()?;
    let b = b.ok_or_else(|| CliError::Input("--b is required".into()))?.prepare()?;
    match c {
        None => {
            let exact = swap_test(&a, &b, 0, 0)?;
            let est = swap_test(&a, &b, shots, seed)?;
            write_json(
                &SwapReport {
                    seed,
                    estimate: Estimate::new(&est, exact.p0_hat),
                },
                out.as_deref(),
            )
        }
        Some(c) => {
            let c = c.prepare()?;
            let wiring = match variant {
                Variant::Fanout => ChainVariant::Fanout,
                Variant::Chain => ChainVariant::Chain,
            };
            let exact = chained_swap_test(&a, [&b, &c], wiring, 0, 0)?;
            let est = chained_swap_test(&a, [&b, &c], wiring, shots, derive_seed(seed, 0))?;
            write_json(
                &ChainedReport {
                    seed,
                    variant: match variant {
                        Variant::Fanout => "fanout",
                        Variant::Chain => "chain",
                    },
                    first: Estimate::new(&est[0], exact[0].p0_hat),
                    second: Estimate::new(&est[1], exact[1].p0_hat),
                },
                out.as_deref(),
            )
        }
    }
}
