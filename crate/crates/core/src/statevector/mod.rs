//! Dense statevector simulation.
//!
//! Qubit 0 is the least-significant bit of the basis-state index: the
//! amplitude of `|q_{n-1} … q_1 q_0⟩` lives at index `Σ q_j 2^j`.

mod circuit;
mod gate;
mod measure;

pub use circuit::{Circuit, Instruction};
pub use gate::{unitarity_deviation, GateOp};
pub use measure::{Measurement, ShotHistogram};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::TOLERANCES;

/// Normalized complex amplitudes over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        QuantumState {
            n_qubits,
            amplitudes,
        }
    }

    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        if index >= 1 << n_qubits {
            return Err(Error::BasisIndex { index, n_qubits });
        }
        let mut state = Self::zero(n_qubits);
        state.amplitudes.swap(0, index);
        Ok(state)
    }

    /// Normalizes `v` into amplitudes `v / ‖v‖₂`.
    pub fn from_real_vector(v: &[f64]) -> Result<Self> {
        Self::from_unnormalized(v.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_unnormalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = log2_exact(amplitudes.len())?;
        let norm = l2_norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(QuantumState {
            n_qubits,
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Takes amplitudes that must already be normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = log2_exact(amplitudes.len())?;
        let norm = l2_norm(&amplitudes);
        if (norm - 1.0).abs() > TOLERANCES.norm {
            return Err(Error::InvalidArgument(format!(
                "amplitudes have norm {norm}, expected 1"
            )));
        }
        Ok(QuantumState {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    /// `⟨self|other⟩ = Σ conj(self_i) other_i`.
    pub fn inner_product(&self, other: &QuantumState) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &QuantumState) -> Result<f64> {
        Ok(self.inner_product(other)?.norm_sqr())
    }

    /// Product state with `self` on the low qubits and `high` above it.
    pub fn tensor(&self, high: &QuantumState) -> QuantumState {
        let mut amplitudes = Vec::with_capacity(self.dim() * high.dim());
        for h in &high.amplitudes {
            amplitudes.extend(self.amplitudes.iter().map(|l| l * h));
        }
        QuantumState {
            n_qubits: self.n_qubits + high.n_qubits,
            amplitudes,
        }
    }

    /// Applies a (controlled) unitary in place.
    pub fn apply(&mut self, gate: &GateOp) -> Result<()> {
        let max = gate.max_qubit();
        if max >= self.n_qubits {
            return Err(Error::QubitIndex {
                qubit: max,
                n_qubits: self.n_qubits,
            });
        }
        let control_mask = gate.controls().iter().fold(0usize, |m, &q| m | (1 << q));
        let targets = gate.targets();
        if targets.len() == 1 {
            self.apply_single(gate, targets[0], control_mask);
        } else {
            self.apply_general(gate, control_mask);
        }
        Ok(())
    }

    fn apply_single(&mut self, gate: &GateOp, target: usize, control_mask: usize) {
        let m = gate.matrix();
        let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        let bit = 1usize << target;
        for i in 0..self.dim() {
            if i & bit != 0 || i & control_mask != control_mask {
                continue;
            }
            let a0 = self.amplitudes[i];
            let a1 = self.amplitudes[i | bit];
            self.amplitudes[i] = m00 * a0 + m01 * a1;
            self.amplitudes[i | bit] = m10 * a0 + m11 * a1;
        }
    }

    fn apply_general(&mut self, gate: &GateOp, control_mask: usize) {
        let targets = gate.targets();
        let local_dim = 1usize << targets.len();
        let target_mask = targets.iter().fold(0usize, |m, &q| m | (1 << q));
        let offsets: Vec<usize> = (0..local_dim)
            .map(|l| {
                targets
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| l >> j & 1 == 1)
                    .fold(0usize, |acc, (_, &q)| acc | (1 << q))
            })
            .collect();
        let m = gate.matrix();
        let mut local = vec![Complex64::new(0.0, 0.0); local_dim];
        for base in 0..self.dim() {
            if base & target_mask != 0 || base & control_mask != control_mask {
                continue;
            }
            for (slot, off) in local.iter_mut().zip(&offsets) {
                *slot = self.amplitudes[base | off];
            }
            for (r, off) in offsets.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, v) in local.iter().enumerate() {
                    acc += m[(r, c)] * v;
                }
                self.amplitudes[base | off] = acc;
            }
        }
    }

    /// Probability that `qubit` reads `outcome`.
    pub fn outcome_probability(&self, qubit: usize, outcome: bool) -> Result<f64> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| (i & bit != 0) == outcome)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Projects `qubit` onto `outcome` and renormalizes. Returns the Born
    /// probability of the outcome with the projected state.
    pub fn project(&self, qubit: usize, outcome: bool) -> Result<(f64, QuantumState)> {
        let probability = self.outcome_probability(qubit, outcome)?;
        if probability <= 0.0 {
            return Err(Error::DegenerateSuccess(probability));
        }
        let bit = 1usize << qubit;
        let scale = probability.sqrt();
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if (i & bit != 0) == outcome {
                    a / scale
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok((
            probability,
            QuantumState {
                n_qubits: self.n_qubits,
                amplitudes,
            },
        ))
    }

    /// Amplitudes of the register `keep` (in listed bit order) restricted to
    /// the branch where every `(qubit, value)` in `fixed` holds. Qubits in
    /// neither list must be in `|0⟩` for the result to be meaningful; they
    /// are read at 0.
    pub fn branch_amplitudes(&self, keep: &[usize], fixed: &[(usize, bool)]) -> Result<Vec<Complex64>> {
        for &q in keep.iter().chain(fixed.iter().map(|(q, _)| q)) {
            self.check_qubit(q)?;
        }
        let base = fixed
            .iter()
            .filter(|(_, v)| *v)
            .fold(0usize, |m, (q, _)| m | (1 << q));
        Ok((0..1usize << keep.len())
            .map(|local| {
                let index = keep
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| local >> j & 1 == 1)
                    .fold(base, |acc, (_, &q)| acc | (1 << q));
                self.amplitudes[index]
            })
            .collect())
    }

    pub(crate) fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitIndex {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }
}

fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn log2_exact(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(len.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn re(state: &QuantumState) -> Vec<f64> {
        state.amplitudes().iter().map(|a| a.re).collect()
    }

    #[test]
    fn basis_states() {
        assert_eq!(re(&QuantumState::basis_state(1, 0).unwrap()), vec![1.0, 0.0]);
        assert_eq!(
            re(&QuantumState::basis_state(2, 3).unwrap()),
            vec![0.0, 0.0, 0.0, 1.0]
        );
        let s = QuantumState::basis_state(3, 5).unwrap();
        assert_eq!(s.dim(), 8);
        assert_eq!(s.amplitude(5), Complex64::new(1.0, 0.0));
        assert!(matches!(
            QuantumState::basis_state(2, 4),
            Err(Error::BasisIndex { .. })
        ));
    }

    #[test]
    fn real_vector_normalization() {
        assert_eq!(re(&QuantumState::from_real_vector(&[1.0, 0.0]).unwrap()), vec![1.0, 0.0]);
        let s = QuantumState::from_real_vector(&[1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(s.amplitude(0).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        let s = QuantumState::from_real_vector(&[3.0, 4.0]).unwrap();
        assert_abs_diff_eq!(s.amplitude(0).re, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitude(1).re, 0.8, epsilon = 1e-15);
        assert!(matches!(
            QuantumState::from_real_vector(&[0.0, 0.0]),
            Err(Error::ZeroVector)
        ));
        assert!(matches!(
            QuantumState::from_real_vector(&[1.0, 2.0, 3.0]),
            Err(Error::NotPowerOfTwo(3))
        ));
    }

    #[test]
    fn hadamard_actions() {
        let mut s = QuantumState::zero(1);
        s.apply(&GateOp::hadamard(0)).unwrap();
        assert_abs_diff_eq!(s.amplitude(0).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitude(1).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        s.apply(&GateOp::hadamard(0)).unwrap();
        assert_abs_diff_eq!(s.amplitude(0).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitude(1).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn unsatisfied_control_is_identity() {
        let mut s = QuantumState::zero(2);
        let cx = GateOp::pauli_x(1).controlled_by(&[0]).unwrap();
        s.apply(&cx).unwrap();
        assert_eq!(s, QuantumState::zero(2));
        // control set: |01⟩ -> |11⟩
        let mut s = QuantumState::basis_state(2, 1).unwrap();
        s.apply(&cx).unwrap();
        assert_eq!(s, QuantumState::basis_state(2, 3).unwrap());
    }

    #[test]
    fn gate_on_missing_qubit_is_rejected() {
        let mut s = QuantumState::zero(1);
        assert!(matches!(
            s.apply(&GateOp::hadamard(3)),
            Err(Error::QubitIndex { .. })
        ));
    }

    #[test]
    fn swap_gate_exchanges_qubits() {
        // |q1 q0⟩ = |01⟩ (index 1) -> |10⟩ (index 2)
        let mut s = QuantumState::basis_state(2, 1).unwrap();
        s.apply(&GateOp::swap(0, 1).unwrap()).unwrap();
        assert_eq!(s, QuantumState::basis_state(2, 2).unwrap());
    }

    #[test]
    fn inner_products() {
        let zero = QuantumState::zero(1);
        let one = QuantumState::basis_state(1, 1).unwrap();
        let mut plus = QuantumState::zero(1);
        plus.apply(&GateOp::hadamard(0)).unwrap();
        assert_abs_diff_eq!(zero.inner_product(&zero).unwrap().re, 1.0);
        assert_abs_diff_eq!(zero.inner_product(&one).unwrap().norm(), 0.0);
        assert_abs_diff_eq!(zero.inner_product(&plus).unwrap().re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert!(zero.inner_product(&QuantumState::zero(2)).is_err());
    }

    #[test]
    fn inner_product_conjugates_left() {
        let a = QuantumState::from_amplitudes(vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)]).unwrap();
        let b = QuantumState::zero(1);
        assert_abs_diff_eq!(a.inner_product(&b).unwrap().im, -1.0);
    }

    #[test]
    fn tensor_places_self_low() {
        let low = QuantumState::basis_state(1, 1).unwrap();
        let high = QuantumState::zero(2);
        let t = low.tensor(&high);
        assert_eq!(t, QuantumState::basis_state(3, 1).unwrap());
        let t = high.tensor(&low);
        assert_eq!(t, QuantumState::basis_state(3, 4).unwrap());
    }

    #[test]
    fn branch_amplitudes_reads_subregister() {
        // qubits: 0,1 register; 2 flag
        let s = QuantumState::basis_state(3, 0b110).unwrap();
        let amps = s.branch_amplitudes(&[0, 1], &[(2, true)]).unwrap();
        assert_eq!(amps[2], Complex64::new(1.0, 0.0));
        let amps = s.branch_amplitudes(&[0, 1], &[(2, false)]).unwrap();
        assert!(amps.iter().all(|a| a.norm() == 0.0));
    }
}
