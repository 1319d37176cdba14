//! Single-layer binary network with straight-through training, optionally
//! restricted to a Hamming sphere around a center vertex.

mod model;
mod project;
mod train;

pub use model::{forward, grad_step, loss_gradient, mse_loss, predict, quantize, step_with, BnnModel};
pub use project::{emulate_quantum_constraint, project_to_constraint};
pub use train::{train, TrainConfig, TrainReport};
