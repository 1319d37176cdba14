//! HHL linear-system solver on the statevector simulator.
//!
//! Hamiltonian simulation uses the exact matrix exponential from a dense
//! eigendecomposition, and eigenvalue inversion is a table of
//! multi-controlled rotations, one per clock register value.

mod circuit;
mod system;

pub use circuit::{build_hhl_circuit, qft, state_preparation, HhlCircuit, RegisterLayout, SpectralPlan};
pub use system::{classical_solve, hermitian_deviation, hermitian_embed, parse_system, LinearSystem};

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::statevector::QuantumState;
use crate::tolerance::TOLERANCES;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HhlConfig {
    /// Width of the phase-estimation register.
    pub clock_qubits: usize,
    /// Evolution time `t` in `exp(iAt)`. When unset the largest eigenvalue
    /// magnitude lands on clock value `2^{m-1}` (or `2^{m-2}` for
    /// indefinite spectra).
    pub evolution_time: Option<f64>,
    /// Inversion constant `C`, in clock units. Defaults to 1, the smallest
    /// nonzero clock value.
    pub rotation_constant: Option<f64>,
    /// Ancilla shots to sample in addition to the exact probability; 0 skips.
    pub shots: u64,
    pub seed: u64,
}

impl Default for HhlConfig {
    fn default() -> Self {
        HhlConfig {
            clock_qubits: 4,
            evolution_time: None,
            rotation_constant: None,
            shots: 0,
            seed: 0,
        }
    }
}

impl HhlConfig {
    pub fn with_clock_qubits(clock_qubits: usize) -> Self {
        HhlConfig {
            clock_qubits,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.clock_qubits == 0 || self.clock_qubits > 12 {
            return Err(Error::HhlConfig(format!(
                "clock qubits must be in 1..=12, got {}",
                self.clock_qubits
            )));
        }
        if let Some(t) = self.evolution_time {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::HhlConfig(format!("evolution time must be positive, got {t}")));
            }
        }
        if let Some(c) = self.rotation_constant {
            if !(c > 0.0 && c <= 1.0) {
                return Err(Error::HhlConfig(format!(
                    "rotation constant must be in (0, 1] clock units, got {c}"
                )));
            }
        }
        Ok(())
    }
}

/// Post-selected output of one HHL run.
#[derive(Debug, Clone, PartialEq)]
pub struct HhlSolution {
    /// Right-hand-side register after post-selecting the ancilla on 1 and
    /// the clock on `|0…0⟩`.
    pub solution_state: QuantumState,
    /// Exact Born probability of ancilla outcome 1.
    pub success_probability: f64,
    /// Probability that the clock register is back in `|0…0⟩` given
    /// ancilla outcome 1.
    pub clock_return_probability: f64,
    /// Fidelity against the dense classical solution, when it exists.
    pub fidelity: Option<f64>,
    /// Frequency of ancilla outcome 1 over `config.shots` samples.
    pub sampled_success: Option<f64>,
    pub eigenvalues: Vec<f64>,
    pub clock_positions: Vec<f64>,
    pub evolution_time: f64,
    pub condition_number: f64,
}

/// Simulates the HHL circuit and post-selects the solution branch.
pub fn run_hhl(system: &LinearSystem, config: &HhlConfig) -> Result<HhlSolution> {
    let built = build_hhl_circuit(system, config)?;
    let layout = &built.layout;
    let mut state = QuantumState::zero(layout.n_qubits());
    built.circuit.apply_to(&mut state)?;

    let success_probability = state.outcome_probability(layout.ancilla, true)?;
    if success_probability < TOLERANCES.min_success {
        return Err(Error::DegenerateSuccess(success_probability));
    }
    let sampled_success = if config.shots > 0 {
        let hist = state.sample_counts(&[layout.ancilla], config.shots, config.seed)?;
        Some(hist.count(1) as f64 / config.shots as f64)
    } else {
        None
    };
    let (_, flagged) = state.project(layout.ancilla, true)?;
    let mut fixed: Vec<(usize, bool)> = layout.clock.iter().map(|&q| (q, false)).collect();
    fixed.push((layout.ancilla, true));
    let branch = flagged.branch_amplitudes(&layout.system, &fixed)?;
    let clock_return_probability: f64 = branch.iter().map(|a| a.norm_sqr()).sum();
    let solution_state = QuantumState::from_unnormalized(branch)?;

    let fidelity = match classical_solve(system) {
        Ok(x) => Some(fidelity_against(&solution_state, &x)?),
        Err(Error::Singular(_)) => None,
        Err(e) => return Err(e),
    };

    Ok(HhlSolution {
        solution_state,
        success_probability,
        clock_return_probability,
        fidelity,
        sampled_success,
        eigenvalues: built.plan.eigenvalues.clone(),
        clock_positions: built.plan.clock_positions.clone(),
        evolution_time: built.plan.evolution_time,
        condition_number: built.plan.condition_number(),
    })
}

/// `|⟨solution | reference/‖reference‖⟩|²`.
pub fn solution_fidelity(solution: &HhlSolution, reference: &[Complex64]) -> Result<f64> {
    fidelity_against(
        &solution.solution_state,
        &DVector::from_column_slice(reference),
    )
}

fn fidelity_against(state: &QuantumState, reference: &DVector<Complex64>) -> Result<f64> {
    if reference.len() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            actual: reference.len(),
        });
    }
    let reference = QuantumState::from_unnormalized(reference.iter().copied().collect())?;
    Ok(state.fidelity(&reference)?.min(1.0))
}
