//! Fixtures shared by the benchmarks.

use hhlbnn_core::hhl::LinearSystem;
use hhlbnn_core::QuantumState;

/// Deterministic dense state on `n` qubits.
pub fn dense_state(n: usize) -> QuantumState {
    let v: Vec<f64> = (0..1usize << n).map(|i| ((i * 7919) % 97) as f64 + 1.0).collect();
    QuantumState::from_real_vector(&v).expect("nonzero vector")
}

/// The 4×4 system with eigenvalues 1, 2, 4, 8 from `data/systems`.
pub fn four_by_four() -> LinearSystem {
    LinearSystem::from_rows(
        &[
            &[3.75, -1.25, -2.25, 0.75],
            &[-1.25, 3.75, 0.75, -2.25],
            &[-2.25, 0.75, 3.75, -1.25],
            &[0.75, -2.25, -1.25, 3.75],
        ],
        &[1.0, 0.0, 0.0, 0.0],
    )
    .expect("valid system")
}
