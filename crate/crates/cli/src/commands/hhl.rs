use std::path::PathBuf;

use clap::Args;
use hhlbnn_core::hhl::{classical_solve, hermitian_embed, parse_system, run_hhl, HhlConfig};
use num_complex::Complex64;
use serde::Serialize;

use super::Common;
use crate::config::ConfigFile;
use crate::error::{CliError, CliResult};
use crate::output::write_json;

#[derive(Debug, Args)]
pub struct HhlArgs {
    /// System file: matrix rows, then the right-hand side on the last row
    #[arg(long)]
    pub system: Option<PathBuf>,
    /// Phase-estimation register width
    #[arg(long)]
    pub clock_qubits: Option<usize>,
    /// Evolution time t (default maps the largest eigenvalue to 2^(m-1))
    #[arg(long)]
    pub time: Option<f64>,
    /// Inversion constant C in clock units, 0 < C <= 1
    #[arg(long)]
    pub constant: Option<f64>,
    /// Ancilla shots to sample alongside the exact probability
    #[arg(long)]
    pub shots: Option<u64>,
    /// Minimum fidelity for a zero exit code
    #[arg(long)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Serialize)]
struct HhlReport {
    dimension: usize,
    embedded: bool,
    clock_qubits: usize,
    evolution_time: f64,
    eigenvalues: Vec<f64>,
    clock_positions: Vec<f64>,
    condition_number: f64,
    success_probability: f64,
    sampled_success: Option<f64>,
    clock_return_probability: f64,
    fidelity: f64,
    threshold: f64,
    solution: Vec<[f64; 2]>,
    classical_solution: Vec<[f64; 2]>,
    seed: u64,
}

fn normalized(v: &[Complex64]) -> Vec<[f64; 2]> {
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|a| [a.re / norm, a.im / norm]).collect()
}

pub fn run(args: HhlArgs) -> CliResult<()> {
    let mut cfg = ConfigFile::load(args.common.config.as_deref())?;
    let path: Option<PathBuf> = cfg.pick_opt(args.system, "system")?;
    let clock_qubits = cfg.pick(args.clock_qubits, "clock-qubits", 4)?;
    let time = cfg.pick_opt(args.time, "time")?;
    let constant = cfg.pick_opt(args.constant, "constant")?;
    let shots = cfg.pick(args.shots, "shots", 0)?;
    let threshold = cfg.pick(args.threshold, "threshold", 0.99)?;
    let seed = cfg.pick(args.common.seed, "seed", 0)?;
    let out: Option<PathBuf> = cfg.pick_opt(args.common.out, "out")?;
    cfg.finish()?;

    let path = path.ok_or_else(|| CliError::Input("--system is required".into()))?;
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let parsed = parse_system(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let classical = classical_solve(&parsed)?;
    let system = hermitian_embed(parsed.matrix(), parsed.rhs())?;
    let config = HhlConfig {
        clock_qubits,
        evolution_time: time,
        rotation_constant: constant,
        shots,
        seed,
    };
    let solution = run_hhl(&system, &config)?;
    let fidelity = solution
        .fidelity
        .ok_or_else(|| CliError::Numerical("no classical reference".into()))?;
    let block = system.original_block(solution.solution_state.amplitudes());

    let report = HhlReport {
        dimension: parsed.dim(),
        embedded: system.embedded_from().is_some(),
        clock_qubits,
        evolution_time: solution.evolution_time,
        eigenvalues: solution.eigenvalues,
        clock_positions: solution.clock_positions,
        condition_number: solution.condition_number,
        success_probability: solution.success_probability,
        sampled_success: solution.sampled_success,
        clock_return_probability: solution.clock_return_probability,
        fidelity,
        threshold,
        solution: normalized(block),
        classical_solution: normalized(classical.as_slice()),
        seed,
    };
    write_json(&report, out.as_deref())?;
    if fidelity < threshold {
        return Err(CliError::Threshold(format!("fidelity {fidelity:.6} < {threshold}")));
    }
    Ok(())
}
