use serde::Serialize;

use crate::binary::BinaryVector;
use crate::error::{Error, Result};

/// Binary vectors at Hamming distance exactly `hamming_radius` from `center`.
///
/// In ±1 encoding each disagreeing coordinate adds 4 to the squared
/// Euclidean distance, so `d² = 4h` and the admissible vertices lie on the
/// plane `c·w = D − d²/2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperplaneConstraint {
    pub center: BinaryVector,
    pub hamming_radius: usize,
    pub euclid_sq: f64,
}

pub fn build_constraint(center: BinaryVector, h: usize) -> Result<HyperplaneConstraint> {
    if h > center.len() {
        return Err(Error::RadiusOutOfRange {
            h,
            dim: center.len(),
        });
    }
    Ok(HyperplaneConstraint {
        center,
        hamming_radius: h,
        euclid_sq: 4.0 * h as f64,
    })
}

impl HyperplaneConstraint {
    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn admits(&self, w: &BinaryVector) -> bool {
        w.len() == self.dim() && w.hamming(&self.center) == self.hamming_radius
    }

    /// Right-hand side of the ±1 plane equation, `D − d²/2`.
    pub fn plane_offset(&self) -> f64 {
        self.dim() as f64 - self.euclid_sq / 2.0
    }

    /// `C(D, h)`, or `None` on overflow.
    pub fn admissible_count(&self) -> Option<u128> {
        binomial(self.dim() as u128, self.hamming_radius as u128)
    }

    /// Every admissible vertex, in lexicographic order of flipped positions.
    /// Intended for small dimensions.
    pub fn admissible_vertices(&self) -> Vec<BinaryVector> {
        let d = self.dim();
        let h = self.hamming_radius;
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..h).collect();
        loop {
            let mut v = self.center.clone();
            for &i in &idx {
                v.flip(i);
            }
            out.push(v);
            // next combination
            let Some(pos) = (0..h).rev().find(|&i| idx[i] != i + d - h) else {
                break;
            };
            idx[pos] += 1;
            for j in pos + 1..h {
                idx[j] = idx[j - 1] + 1;
            }
        }
        out
    }
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}
