use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::TOLERANCES;

/// A square system `A x = b` with power-of-two dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    matrix: DMatrix<Complex64>,
    rhs: DVector<Complex64>,
    /// Original dimension when this system is a Hermitian embedding.
    embedded_from: Option<usize>,
}

impl LinearSystem {
    pub fn new(matrix: DMatrix<Complex64>, rhs: DVector<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let n = matrix.nrows();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        if rhs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: rhs.len(),
            });
        }
        if rhs.iter().all(|v| v.norm() == 0.0) {
            return Err(Error::ZeroVector);
        }
        Ok(LinearSystem {
            matrix,
            rhs,
            embedded_from: None,
        })
    }

    pub fn from_real(matrix: &DMatrix<f64>, rhs: &[f64]) -> Result<Self> {
        Self::new(
            matrix.map(|v| Complex64::new(v, 0.0)),
            DVector::from_iterator(rhs.len(), rhs.iter().map(|&v| Complex64::new(v, 0.0))),
        )
    }

    /// Row-major convenience constructor.
    pub fn from_rows(rows: &[&[f64]], rhs: &[f64]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        Self::from_real(&DMatrix::from_fn(n, n, |r, c| rows[r][c]), rhs)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Qubits needed to hold the right-hand side.
    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn rhs(&self) -> &DVector<Complex64> {
        &self.rhs
    }

    pub fn embedded_from(&self) -> Option<usize> {
        self.embedded_from
    }

    /// Max-abs entry of `A − A†`.
    pub fn hermitian_deviation(&self) -> f64 {
        hermitian_deviation(&self.matrix)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() <= TOLERANCES.hermitian
    }

    /// For an embedded system, the sub-block of a full solution that solves
    /// the original system; otherwise the input unchanged.
    pub fn original_block<'a>(&self, full: &'a [Complex64]) -> &'a [Complex64] {
        match self.embedded_from {
            Some(n) => &full[n..2 * n],
            None => full,
        }
    }

    /// Ratio of extreme singular values.
    pub fn condition_number(&self) -> f64 {
        let sv = self.matrix.clone().svd(false, false).singular_values;
        let max = sv.max();
        let min = sv.min();
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }
}

pub fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Direct dense solve, used as the reference for the quantum solution.
pub fn classical_solve(system: &LinearSystem) -> Result<DVector<Complex64>> {
    let sv = system.matrix.clone().svd(false, false).singular_values;
    let (max, min) = (sv.max(), sv.min());
    if max == 0.0 || min / max < TOLERANCES.singular {
        return Err(Error::Singular(min));
    }
    let x = system
        .matrix
        .clone()
        .lu()
        .solve(&system.rhs)
        .ok_or(Error::Singular(min))?;
    let residual = (&system.matrix * &x - &system.rhs).norm();
    if residual >= 1e-8 * system.rhs.norm().max(1.0) {
        return Err(Error::Singular(min));
    }
    Ok(x)
}

/// Hermitian dilation `[[0, A], [A†, 0]]` with right-hand side `[b, 0]`.
///
/// A Hermitian input is returned unchanged. For the dilated system the
/// solution of `A x = b` sits in the second half of the solution vector.
pub fn hermitian_embed(a: &DMatrix<Complex64>, b: &DVector<Complex64>) -> Result<LinearSystem> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if hermitian_deviation(a) <= TOLERANCES.hermitian {
        return LinearSystem::new(a.clone(), b.clone());
    }
    let n = a.nrows();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: b.len(),
        });
    }
    let mut big = DMatrix::zeros(2 * n, 2 * n);
    big.view_mut((0, n), (n, n)).copy_from(a);
    big.view_mut((n, 0), (n, n)).copy_from(&a.adjoint());
    let mut rhs = DVector::zeros(2 * n);
    rhs.rows_mut(0, n).copy_from(b);
    let mut system = LinearSystem::new(big, rhs)?;
    system.embedded_from = Some(n);
    Ok(system)
}

/// Parses a system from text: the square matrix as rows of
/// whitespace-separated reals followed by the right-hand side on a final
/// row. Blank lines and `#` comments are ignored.
pub fn parse_system(text: &str) -> Result<LinearSystem> {
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let values = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("cannot parse {tok:?} as a number"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((line_no, values));
    }
    let Some((first_line, first)) = rows.first() else {
        return Err(Error::Parse {
            line: 0,
            message: "empty system file".into(),
        });
    };
    let n = first.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::Parse {
            line: *first_line,
            message: format!("matrix dimension {n} is not a power of two >= 2"),
        });
    }
    for (line, values) in &rows {
        if values.len() != n {
            return Err(Error::Parse {
                line: *line,
                message: format!("expected {n} values, found {}", values.len()),
            });
        }
    }
    if rows.len() != n + 1 {
        let line = rows.last().map(|(l, _)| *l).unwrap_or(0);
        return Err(Error::Parse {
            line,
            message: format!(
                "expected {n} matrix rows plus one right-hand-side row, found {} rows",
                rows.len()
            ),
        });
    }
    let matrix = DMatrix::from_fn(n, n, |r, c| rows[r].1[c]);
    let rhs = &rows[n].1;
    LinearSystem::from_real(&matrix, rhs).map_err(|e| Error::Parse {
        line: rows[n].0,
        message: e.to_string(),
    })
}
