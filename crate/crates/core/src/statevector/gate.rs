use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::TOLERANCES;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A (possibly controlled) unitary acting on an ordered list of target qubits.
///
/// `targets[j]` is bit `j` of the matrix's local basis index, so for a
/// two-qubit matrix the row/column index is `b0 + 2*b1` where `b0` is the
/// value of `targets[0]`. The unitary acts only on the subspace where every
/// control qubit is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    matrix: DMatrix<Complex64>,
    targets: Vec<usize>,
    controls: Vec<usize>,
}

impl GateOp {
    pub fn new(matrix: DMatrix<Complex64>, targets: Vec<usize>, controls: Vec<usize>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if targets.is_empty() {
            return Err(Error::GateLayout("gate needs at least one target".into()));
        }
        let expected = 1usize << targets.len();
        if matrix.nrows() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: matrix.nrows(),
            });
        }
        let mut seen = targets.clone();
        seen.extend_from_slice(&controls);
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::GateLayout(format!(
                "targets {targets:?} and controls {controls:?} must be distinct"
            )));
        }
        let deviation = unitarity_deviation(&matrix);
        if deviation > TOLERANCES.unitarity {
            return Err(Error::NonUnitary { deviation });
        }
        Ok(GateOp {
            matrix,
            targets,
            controls,
        })
    }

    pub fn single(matrix: [[Complex64; 2]; 2], target: usize) -> Result<Self> {
        let m = DMatrix::from_fn(2, 2, |r, c| matrix[r][c]);
        Self::new(m, vec![target], Vec::new())
    }

    pub fn hadamard(target: usize) -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self::single([[h, h], [h, -h]], target).expect("hadamard is unitary")
    }

    pub fn pauli_x(target: usize) -> Self {
        Self::single([[ZERO, ONE], [ONE, ZERO]], target).expect("X is unitary")
    }

    /// Rotation about Y: `[[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
    pub fn ry(theta: f64, target: usize) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        let (s, c) = (Complex64::new(s, 0.0), Complex64::new(c, 0.0));
        Self::single([[c, -s], [s, c]], target).expect("RY is unitary")
    }

    /// `diag(1, e^{iθ})`.
    pub fn phase(theta: f64, target: usize) -> Self {
        Self::single([[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, theta)]], target)
            .expect("phase gate is unitary")
    }

    pub fn swap(a: usize, b: usize) -> Result<Self> {
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 0)] = ONE;
        m[(1, 2)] = ONE;
        m[(2, 1)] = ONE;
        m[(3, 3)] = ONE;
        Self::new(m, vec![a, b], Vec::new())
    }

    /// Adds control qubits.
    pub fn controlled_by(mut self, controls: &[usize]) -> Result<Self> {
        self.controls.extend_from_slice(controls);
        Self::new(self.matrix, self.targets, self.controls)
    }

    pub fn dagger(&self) -> Self {
        GateOp {
            matrix: self.matrix.adjoint(),
            targets: self.targets.clone(),
            controls: self.controls.clone(),
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn controls(&self) -> &[usize] {
        &self.controls
    }

    /// Largest qubit index touched by this gate.
    pub fn max_qubit(&self) -> usize {
        self.targets
            .iter()
            .chain(&self.controls)
            .copied()
            .max()
            .unwrap_or(0)
    }
}

/// Max-abs entry of `U†U − I`.
pub fn unitarity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let product = m.adjoint() * m;
    let mut worst = 0.0f64;
    for r in 0..product.nrows() {
        for c in 0..product.ncols() {
            let expected = if r == c { ONE } else { ZERO };
            worst = worst.max((product[(r, c)] - expected).norm());
        }
    }
    worst
}
