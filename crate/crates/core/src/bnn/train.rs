use serde::Serialize;

use super::model::{mse_loss, predict, quantize, step_with, BnnModel};
use super::project::project_to_constraint;
use crate::binary::BinaryVector;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::overlap::HyperplaneConstraint;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub max_iterations: usize,
    /// Consecutive epochs without validation improvement before stopping.
    pub patience: usize,
    /// Seed of the U(0, 1) weight initialization.
    pub seed: u64,
    /// Forward scale; `None` means `1/D`.
    pub output_scale: Option<f64>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 5000.0,
            max_iterations: 200,
            patience: 3,
            seed: 0,
            output_scale: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidArgument("learning rate must be positive".into()));
        }
        if self.max_iterations == 0 || self.patience == 0 {
            return Err(Error::InvalidArgument("max_iterations and patience must be at least 1".into()));
        }
        if let Some(s) = self.output_scale {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::InvalidArgument("output scale must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn scale_for(&self, dim: usize) -> f64 {
        self.output_scale.unwrap_or(1.0 / dim as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainReport {
    /// Epoch of the best validation loss (1-based).
    pub iterations: usize,
    pub final_val_loss: f64,
    pub solution: BinaryVector,
    pub converged: bool,
    pub constrained: bool,
    /// Validation loss after every epoch.
    pub val_history: Vec<f64>,
}

impl TrainReport {
    /// First epoch whose validation loss is at most `target`.
    pub fn first_epoch_reaching(&self, target: f64) -> Option<usize> {
        self.val_history.iter().position(|&v| v <= target).map(|i| i + 1)
    }
}

/// Full-batch training from a `U(0, 1)` initialization seeded by
/// `config.seed`. Every forward pass binarizes with [`quantize`], or with
/// [`project_to_constraint`] when a constraint is given.
pub fn train(
    train_set: &Dataset,
    validation: &Dataset,
    config: &TrainConfig,
    constraint: Option<&HyperplaneConstraint>,
) -> Result<TrainReport> {
    config.validate()?;
    if train_set.is_empty() || validation.is_empty() {
        return Err(Error::InvalidArgument("training and validation sets must be nonempty".into()));
    }
    if train_set.n_features != validation.n_features {
        return Err(Error::DimensionMismatch {
            expected: train_set.n_features,
            actual: validation.n_features,
        });
    }
    let dim = train_set.n_features + 1;
    if let Some(k) = constraint {
        if k.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: k.dim(),
            });
        }
    }
    let scale = config.scale_for(dim);
    let binarize = |w: &[f64]| -> Result<BinaryVector> {
        match constraint {
            Some(k) => project_to_constraint(w, k),
            None => Ok(quantize(w)),
        }
    };
    let val_targets = validation.targets();

    let mut model = BnnModel::random(train_set.n_features, config.seed);
    let mut best = f64::INFINITY;
    let mut best_epoch = 0;
    let mut best_solution = binarize(&model.weights_fp)?;
    let mut stale = 0;
    let mut converged = false;
    let mut history = Vec::new();
    for epoch in 1..=config.max_iterations {
        let q = binarize(&model.weights_fp)?;
        model = step_with(&model, &q, train_set, config.learning_rate, scale);
        let q = binarize(&model.weights_fp)?;
        let loss = mse_loss(&predict(&q.to_f64(), validation, scale), &val_targets)?;
        history.push(loss);
        if loss < best {
            best = loss;
            best_epoch = epoch;
            best_solution = q;
            stale = 0;
        } else {
            stale += 1;
            if stale >= config.patience {
                converged = true;
                break;
            }
        }
    }
    Ok(TrainReport {
        iterations: best_epoch,
        final_val_loss: best,
        solution: best_solution,
        converged,
        constrained: constraint.is_some(),
        val_history: history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bnn::emulate_quantum_constraint;
    use crate::overlap::build_constraint;

    fn toy() -> Dataset {
        // target = x0, fitted exactly by w = [1, 0, 0]
        Dataset::from_features(
            vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0],
            2,
            BinaryVector::parse("0101").unwrap(),
        )
        .unwrap()
    }

    fn best_binary_mse(data: &Dataset) -> f64 {
        (0..8u8)
            .map(|m| {
                let w: Vec<f64> = (0..3).map(|j| f64::from((m >> j) & 1)).collect();
                mse_loss(&predict(&w, data, 1.0), &data.targets()).unwrap()
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn toy_config(seed: u64) -> TrainConfig {
        TrainConfig {
            learning_rate: 0.2,
            max_iterations: 200,
            patience: 20,
            seed,
            output_scale: Some(1.0),
        }
    }

    #[test]
    fn separable_toy_reaches_exhaustive_optimum() {
        let data = toy();
        let target = best_binary_mse(&data);
        assert_eq!(target, 0.0);
        for seed in 0..50 {
            let r = train(&data, &data, &toy_config(seed), None).unwrap();
            assert!(r.converged);
            assert!(r.final_val_loss <= target + 1e-12, "seed {seed}: {}", r.final_val_loss);
            assert_eq!(r.solution.to_string(), "100");
        }
    }

    #[test]
    fn training_is_deterministic() {
        let data = toy();
        let a = train(&data, &data, &toy_config(4), None).unwrap();
        let b = train(&data, &data, &toy_config(4), None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exact_center_converges_immediately() {
        let data = toy();
        let w_star = BinaryVector::parse("100").unwrap();
        let k = build_constraint(w_star.clone(), 0).unwrap();
        let r = train(&data, &data, &toy_config(1), Some(&k)).unwrap();
        assert_eq!(r.iterations, 1);
        assert_eq!(r.solution, w_star);
        assert!(r.constrained && r.converged);
    }

    #[test]
    fn constrained_solutions_stay_on_the_sphere() {
        let data = toy();
        let w_star = BinaryVector::parse("100").unwrap();
        for seed in 0..10 {
            let k = emulate_quantum_constraint(&w_star, seed);
            let r = train(&data, &data, &toy_config(seed), Some(&k)).unwrap();
            assert!(k.admits(&r.solution));
        }
    }

    #[test]
    fn rejects_mismatched_constraint() {
        let data = toy();
        let k = build_constraint(BinaryVector::zeros(5), 1).unwrap();
        assert!(train(&data, &data, &toy_config(0), Some(&k)).is_err());
    }
}
