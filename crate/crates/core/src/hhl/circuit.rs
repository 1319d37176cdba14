use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::{HhlConfig, LinearSystem};
use crate::error::{Error, Result};
use crate::statevector::{Circuit, GateOp};

/// Qubit assignment: right-hand side in the low qubits, then the clock
/// register, then the flag ancilla.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    pub system: Vec<usize>,
    pub clock: Vec<usize>,
    pub ancilla: usize,
}

impl RegisterLayout {
    pub fn new(system_qubits: usize, clock_qubits: usize) -> Self {
        RegisterLayout {
            system: (0..system_qubits).collect(),
            clock: (system_qubits..system_qubits + clock_qubits).collect(),
            ancilla: system_qubits + clock_qubits,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.ancilla + 1
    }
}

/// Spectrum of the system matrix and how it lands on the clock register.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPlan {
    pub eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
    pub evolution_time: f64,
    pub rotation_constant: f64,
    /// Clock values read as two's complement when the spectrum has a
    /// negative eigenvalue.
    pub signed_clock: bool,
    /// Ideal (unrounded) clock position of each eigenvalue.
    pub clock_positions: Vec<f64>,
}

impl SpectralPlan {
    pub fn new(system: &LinearSystem, config: &HhlConfig) -> Result<Self> {
        config.validate()?;
        let deviation = system.hermitian_deviation();
        if !system.is_hermitian() {
            return Err(Error::NotHermitian(deviation));
        }
        let eig = SymmetricEigen::new(system.matrix().clone());
        let eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let signed_clock = eigenvalues.iter().any(|&l| l < 0.0);
        let m = config.clock_qubits;
        if signed_clock && m < 2 {
            return Err(Error::HhlConfig(
                "a spectrum with negative eigenvalues needs at least 2 clock qubits".into(),
            ));
        }
        let max_abs = eigenvalues.iter().fold(0.0f64, |a, l| a.max(l.abs()));
        if max_abs == 0.0 {
            return Err(Error::Singular(0.0));
        }
        let evolution_time = config.evolution_time.unwrap_or(if signed_clock {
            PI / (2.0 * max_abs)
        } else {
            PI / max_abs
        });
        let scale = (1u64 << m) as f64;
        let clock_positions: Vec<f64> = eigenvalues
            .iter()
            .map(|l| l * evolution_time * scale / (2.0 * PI))
            .collect();
        for (&l, &pos) in eigenvalues.iter().zip(&clock_positions) {
            if pos.round().rem_euclid(scale) == 0.0 {
                return Err(Error::ZeroClockValue { eigenvalue: l });
            }
        }
        Ok(SpectralPlan {
            eigenvalues,
            eigenvectors: eig.eigenvectors,
            evolution_time,
            rotation_constant: config.rotation_constant.unwrap_or(1.0),
            signed_clock,
            clock_positions,
        })
    }

    /// `exp(i A t k)` from the eigendecomposition.
    pub fn evolution(&self, multiple: f64) -> DMatrix<Complex64> {
        let phases = DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues
                .iter()
                .map(|l| Complex64::from_polar(1.0, l * self.evolution_time * multiple)),
        );
        let v = &self.eigenvectors;
        v * DMatrix::from_diagonal(&phases) * v.adjoint()
    }

    /// Eigenvalue estimate (in clock units) encoded by a clock register value.
    pub fn clock_eigenvalue(&self, value: usize, clock_qubits: usize) -> f64 {
        let size = 1usize << clock_qubits;
        if self.signed_clock && value >= size / 2 {
            value as f64 - size as f64
        } else {
            value as f64
        }
    }

    pub fn condition_number(&self) -> f64 {
        let (min, max) = self
            .eigenvalues
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), l| (lo.min(l.abs()), hi.max(l.abs())));
        max / min
    }

    /// True when every eigenvalue sits exactly on a clock grid point.
    pub fn exactly_representable(&self) -> bool {
        self.clock_positions
            .iter()
            .all(|p| (p - p.round()).abs() < 1e-9)
    }
}

/// The gate sequence for one HHL run.
#[derive(Debug, Clone)]
pub struct HhlCircuit {
    pub layout: RegisterLayout,
    pub plan: SpectralPlan,
    pub circuit: Circuit,
}

/// Builds: state preparation, phase estimation, controlled eigenvalue
/// inversion, inverse phase estimation, and a measurement marker on the
/// flag ancilla.
pub fn build_hhl_circuit(system: &LinearSystem, config: &HhlConfig) -> Result<HhlCircuit> {
    let plan = SpectralPlan::new(system, config)?;
    let layout = RegisterLayout::new(system.n_qubits(), config.clock_qubits);
    let mut circuit = Circuit::new(layout.n_qubits());

    let rhs: Vec<Complex64> = system.rhs().iter().copied().collect();
    circuit.push(state_preparation(&rhs, &layout.system)?);

    let qpe = phase_estimation(&plan, &layout)?;
    circuit.extend(qpe.iter().cloned());
    circuit.extend(eigenvalue_inversion(&plan, &layout)?);
    circuit.extend(qpe.iter().rev().map(GateOp::dagger));
    circuit.measure(layout.ancilla);

    Ok(HhlCircuit {
        layout,
        plan,
        circuit,
    })
}

/// Householder-based unitary mapping `|0…0⟩` to the normalized `target`.
pub fn state_preparation(target: &[Complex64], qubits: &[usize]) -> Result<GateOp> {
    let dim = target.len();
    if dim != 1 << qubits.len() {
        return Err(Error::DimensionMismatch {
            expected: 1 << qubits.len(),
            actual: dim,
        });
    }
    let norm = target.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let first = target[0];
    let phase = if first.norm() > 0.0 {
        first / first.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    // w = conj(phase) * b has a real nonnegative first entry
    let w: Vec<Complex64> = target.iter().map(|a| phase.conj() * a / norm).collect();
    let mut v = w.iter().map(|a| -a).collect::<Vec<_>>();
    v[0] += Complex64::new(1.0, 0.0);
    let v_norm_sq: f64 = v.iter().map(|a| a.norm_sqr()).sum();
    let matrix = if v_norm_sq < 1e-24 {
        DMatrix::from_diagonal_element(dim, dim, phase)
    } else {
        let v = DVector::from_vec(v);
        let reflector = DMatrix::identity(dim, dim) - (&v * v.adjoint()) * Complex64::new(2.0 / v_norm_sq, 0.0);
        reflector * phase
    };
    GateOp::new(matrix, qubits.to_vec(), Vec::new())
}

fn phase_estimation(plan: &SpectralPlan, layout: &RegisterLayout) -> Result<Vec<GateOp>> {
    let mut gates: Vec<GateOp> = layout.clock.iter().map(|&q| GateOp::hadamard(q)).collect();
    for (j, &control) in layout.clock.iter().enumerate() {
        let power = plan.evolution((1u64 << j) as f64);
        gates.push(GateOp::new(power, layout.system.clone(), vec![control])?);
    }
    gates.extend(qft(&layout.clock)?.iter().rev().map(GateOp::dagger));
    Ok(gates)
}

/// `RY(2 arcsin(C/λ))` on the ancilla for every nonzero clock value λ.
fn eigenvalue_inversion(plan: &SpectralPlan, layout: &RegisterLayout) -> Result<Vec<GateOp>> {
    let m = layout.clock.len();
    let mut gates = Vec::new();
    for value in 1..1usize << m {
        let lambda = plan.clock_eigenvalue(value, m);
        let ratio = plan.rotation_constant / lambda;
        let theta = 2.0 * ratio.clamp(-1.0, 1.0).asin();
        let flips: Vec<GateOp> = layout
            .clock
            .iter()
            .enumerate()
            .filter(|(j, _)| value >> j & 1 == 0)
            .map(|(_, &q)| GateOp::pauli_x(q))
            .collect();
        gates.extend(flips.iter().cloned());
        gates.push(GateOp::ry(theta, layout.ancilla).controlled_by(&layout.clock)?);
        gates.extend(flips);
    }
    Ok(gates)
}

/// Quantum Fourier transform `|x⟩ ↦ M^{-1/2} Σ_y e^{2πi xy/M} |y⟩` with
/// `qubits[0]` the least-significant bit.
pub fn qft(qubits: &[usize]) -> Result<Vec<GateOp>> {
    let m = qubits.len();
    let mut gates = Vec::new();
    for a in (0..m).rev() {
        gates.push(GateOp::hadamard(qubits[a]));
        for b in (0..a).rev() {
            let angle = PI / (1u64 << (a - b)) as f64;
            gates.push(GateOp::phase(angle, qubits[a]).controlled_by(&[qubits[b]])?);
        }
    }
    for i in 0..m / 2 {
        gates.push(GateOp::swap(qubits[i], qubits[m - 1 - i])?);
    }
    Ok(gates)
}
