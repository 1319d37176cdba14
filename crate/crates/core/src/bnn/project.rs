use rand::Rng;

use crate::binary::BinaryVector;
use crate::error::{Error, Result};
use crate::overlap::{build_constraint, HyperplaneConstraint};
use crate::rng::rng_from_seed;

/// Closest vertex to `weights_fp` among those at Hamming distance exactly
/// `h` from the constraint center.
///
/// Disagreeing with `cᵢ` costs `Δᵢ = ((1−cᵢ) − wᵢ)² − (cᵢ − wᵢ)²` over
/// agreeing, and the costs are separable, so flipping the `h` smallest
/// `Δᵢ` (lowest index first on ties) is optimal.
pub fn project_to_constraint(weights_fp: &[f64], constraint: &HyperplaneConstraint) -> Result<BinaryVector> {
    let d = constraint.dim();
    let h = constraint.hamming_radius;
    if weights_fp.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: weights_fp.len(),
        });
    }
    if h > d {
        return Err(Error::RadiusOutOfRange { h, dim: d });
    }
    let delta = |i: usize| {
        let c = if constraint.center.get(i) { 1.0 } else { 0.0 };
        let w = weights_fp[i];
        ((1.0 - c) - w).powi(2) - (c - w).powi(2)
    };
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| delta(a).total_cmp(&delta(b)).then(a.cmp(&b)));
    let mut out = constraint.center.clone();
    for &i in &order[..h] {
        out.flip(i);
    }
    Ok(out)
}

/// Classical stand-in for the quantum extraction: a seeded random center and
/// its exact Hamming distance to `w_star`.
pub fn emulate_quantum_constraint(w_star: &BinaryVector, center_seed: u64) -> HyperplaneConstraint {
    let mut rng = rng_from_seed(center_seed);
    let center: BinaryVector = (0..w_star.len()).map(|_| rng.random::<bool>()).collect();
    let h = center.hamming(w_star);
    build_constraint(center, h).expect("hamming distance is within range")
}
