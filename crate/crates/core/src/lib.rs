//! Statevector simulation of the HHL linear solver and SWAP tests, and the
//! Hamming-constrained binary network training they feed.

pub mod binary;
pub mod bnn;
pub mod data;
pub mod error;
pub mod experiment;
pub mod hhl;
pub mod overlap;
pub mod pipeline;
pub mod rng;
pub mod sampling;
pub mod statevector;
pub mod tolerance;

pub use binary::BinaryVector;
pub use error::{Error, Result};
pub use hhl::{classical_solve, hermitian_embed, run_hhl, HhlConfig, HhlSolution, LinearSystem};
pub use statevector::{Circuit, GateOp, QuantumState, ShotHistogram};
