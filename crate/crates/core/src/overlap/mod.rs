//! SWAP tests and what their ancilla statistics reveal about a weight state.
//!
//! For states with nonnegative real amplitudes (the binary-weight regime)
//! the measured `|⟨W|tW⟩|²` determines the overlap itself, hence the
//! Euclidean distance between the normalized vectors, the number of active
//! weights, and the Hamming distance to a uniform-mask test state.

mod constraint;

pub use constraint::{build_constraint, HyperplaneConstraint};

use serde::Serialize;

use crate::binary::BinaryVector;
use crate::error::{Error, Result};
use crate::statevector::{Circuit, GateOp, QuantumState};

/// Uniform superpositions used as SWAP-test references.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TestStateSpec {
    /// `H^{⊗n}|0⟩`.
    FullUniform { n_qubits: usize },
    /// Equal amplitude on the set positions of `mask`.
    UniformOverMask { mask: BinaryVector },
}

pub fn prepare_test_state(spec: &TestStateSpec) -> Result<QuantumState> {
    match spec {
        TestStateSpec::FullUniform { n_qubits } => {
            let mut state = QuantumState::zero(*n_qubits);
            for q in 0..*n_qubits {
                state.apply(&GateOp::hadamard(q))?;
            }
            Ok(state)
        }
        TestStateSpec::UniformOverMask { mask } => {
            if mask.count_ones() == 0 {
                return Err(Error::EmptyMask);
            }
            QuantumState::from_real_vector(&mask.to_f64())
        }
    }
}

/// Ancilla statistics of a SWAP test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapEstimate {
    /// Probability (exact) or frequency (sampled) of ancilla outcome 0.
    pub p0_hat: f64,
    /// `clamp(2 p0 − 1, 0, 1)`, the estimate of `|⟨a|b⟩|²`.
    pub overlap_sq: f64,
    /// 0 in exact mode.
    pub shots: u64,
    /// Binomial standard error of `p0_hat`; 0 in exact mode.
    pub std_error: f64,
    pub exact: bool,
}

impl OverlapEstimate {
    pub fn exact(p0: f64) -> Self {
        OverlapEstimate {
            p0_hat: p0,
            overlap_sq: (2.0 * p0 - 1.0).clamp(0.0, 1.0),
            shots: 0,
            std_error: 0.0,
            exact: true,
        }
    }

    pub fn sampled(zeros: u64, shots: u64) -> Self {
        let p0 = zeros as f64 / shots as f64;
        OverlapEstimate {
            p0_hat: p0,
            overlap_sq: (2.0 * p0 - 1.0).clamp(0.0, 1.0),
            shots,
            std_error: (p0 * (1.0 - p0) / shots as f64).sqrt(),
            exact: false,
        }
    }
}

/// Ancilla, controlled swaps across register pairs, ancilla.
fn swap_test_circuit(n: usize) -> Result<Circuit> {
    let ancilla = 2 * n;
    let mut circuit = Circuit::new(2 * n + 1);
    circuit.push(GateOp::hadamard(ancilla));
    for i in 0..n {
        circuit.push(GateOp::swap(i, n + i)?.controlled_by(&[ancilla])?);
    }
    circuit.push(GateOp::hadamard(ancilla));
    circuit.measure(ancilla);
    Ok(circuit)
}

/// SWAP test between `a` and `b`. `shots == 0` reads the exact ancilla
/// distribution instead of sampling it.
pub fn swap_test(a: &QuantumState, b: &QuantumState, shots: u64, seed: u64) -> Result<OverlapEstimate> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    let n = a.n_qubits();
    let mut state = a.tensor(b).tensor(&QuantumState::zero(1));
    swap_test_circuit(n)?.apply_to(&mut state)?;
    ancilla_estimates(&state, &[2 * n], shots, seed).map(|v| v[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChainVariant {
    /// Both ancillas swap the prepared state with one reference each.
    #[default]
    Fanout,
    /// The second ancilla swaps the two references.
    Chain,
}

/// Two SWAP tests sharing the prepared state `a`.
///
/// With `refs = [B, C]` the first ancilla gives `p0 = ½ + ½|⟨A|B⟩|²` and the
/// second `p0 = ¼(2 + |⟨A|C⟩|² + |⟨B|C⟩|²)`, for either wiring.
pub fn chained_swap_test(
    a: &QuantumState,
    refs: [&QuantumState; 2],
    variant: ChainVariant,
    shots: u64,
    seed: u64,
) -> Result<Vec<OverlapEstimate>> {
    for r in refs {
        if r.n_qubits() != a.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                actual: r.dim(),
            });
        }
    }
    let n = a.n_qubits();
    let (first, second) = (3 * n, 3 * n + 1);
    let mut state = a
        .tensor(refs[0])
        .tensor(refs[1])
        .tensor(&QuantumState::zero(2));
    let mut circuit = Circuit::new(3 * n + 2);
    circuit.push(GateOp::hadamard(first));
    circuit.push(GateOp::hadamard(second));
    for i in 0..n {
        circuit.push(GateOp::swap(i, n + i)?.controlled_by(&[first])?);
    }
    for i in 0..n {
        let pair = match variant {
            ChainVariant::Fanout => GateOp::swap(i, 2 * n + i)?,
            ChainVariant::Chain => GateOp::swap(n + i, 2 * n + i)?,
        };
        circuit.push(pair.controlled_by(&[second])?);
    }
    circuit.push(GateOp::hadamard(first));
    circuit.push(GateOp::hadamard(second));
    circuit.apply_to(&mut state)?;
    ancilla_estimates(&state, &[first, second], shots, seed)
}

fn ancilla_estimates(state: &QuantumState, ancillas: &[usize], shots: u64, seed: u64) -> Result<Vec<OverlapEstimate>> {
    if shots == 0 {
        return ancillas
            .iter()
            .map(|&q| Ok(OverlapEstimate::exact(state.outcome_probability(q, false)?)))
            .collect();
    }
    let hist = state.sample_counts(ancillas, shots, seed)?;
    let joint = hist.frequencies();
    Ok((0..ancillas.len())
        .map(|j| {
            let zeros: u64 = (0..joint.len())
                .filter(|k| k >> j & 1 == 0)
                .map(|k| hist.count(k))
                .sum();
            OverlapEstimate::sampled(zeros, shots)
        })
        .collect())
}

/// Squared Euclidean distance between the normalized vectors,
/// `2 − 2√overlap_sq`. Valid when both states have nonnegative real
/// amplitudes, so that `⟨a|b⟩ = √|⟨a|b⟩|²`.
pub fn overlap_to_distance(est: &OverlapEstimate) -> f64 {
    2.0 - 2.0 * est.overlap_sq.clamp(0.0, 1.0).sqrt()
}

/// `round(overlap_sq · 2^n)`: for `w` uniform over `N` positions the overlap
/// with the full uniform state is `√(N / 2^n)`.
pub fn active_count_from_overlap(overlap_sq: f64, n_qubits: usize) -> usize {
    (overlap_sq.clamp(0.0, 1.0) * (1u64 << n_qubits) as f64).round() as usize
}

/// Estimates the number of nonzero entries of a uniform-support state.
pub fn estimate_active_count(w: &QuantumState, shots: u64, seed: u64) -> Result<usize> {
    let uniform = prepare_test_state(&TestStateSpec::FullUniform {
        n_qubits: w.n_qubits(),
    })?;
    let est = swap_test(w, &uniform, shots, seed)?;
    Ok(active_count_from_overlap(est.overlap_sq, w.n_qubits()).max(1))
}

/// Hamming distance between two binary vectors with `n_ones_w` and
/// `n_ones_test` ones, given `|⟨W|tW⟩|² = k² / (N M)` where `k` is the size
/// of their intersection.
pub fn hamming_radius_from_overlap(overlap_sq: f64, n_ones_w: usize, n_ones_test: usize) -> Result<usize> {
    if n_ones_w == 0 || n_ones_test == 0 {
        return Err(Error::InvalidArgument("one counts must be at least 1".into()));
    }
    if !(0.0..=1.0 + 1e-12).contains(&overlap_sq) {
        return Err(Error::InvalidArgument(format!(
            "overlap_sq {overlap_sq} outside [0, 1]"
        )));
    }
    let intersection = (overlap_sq * n_ones_w as f64 * n_ones_test as f64).sqrt();
    let limit = n_ones_w.min(n_ones_test);
    if intersection > limit as f64 + 0.5 {
        return Err(Error::InconsistentOverlap {
            intersection,
            n_w: n_ones_w,
            n_t: n_ones_test,
        });
    }
    let k = (intersection.round() as usize).min(limit);
    Ok(n_ones_w + n_ones_test - 2 * k)
}
