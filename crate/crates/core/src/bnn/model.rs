use rand::Rng;
use serde::Serialize;

use crate::binary::BinaryVector;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Full-precision shadow weights of a single-layer binary network. The last
/// coordinate is the bias.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BnnModel {
    pub weights_fp: Vec<f64>,
    pub d_inputs: usize,
}

impl BnnModel {
    pub fn new(weights_fp: Vec<f64>) -> Result<Self> {
        if weights_fp.len() < 2 {
            return Err(Error::InvalidArgument("model needs at least one input and a bias".into()));
        }
        if weights_fp.iter().any(|w| !(0.0..=1.0).contains(w)) {
            return Err(Error::InvalidArgument("weights must lie in [0, 1]".into()));
        }
        let d_inputs = weights_fp.len() - 1;
        Ok(BnnModel { weights_fp, d_inputs })
    }

    /// Weights drawn i.i.d. from U(0, 1).
    pub fn random(d_inputs: usize, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        BnnModel {
            weights_fp: (0..=d_inputs).map(|_| rng.random::<f64>()).collect(),
            d_inputs,
        }
    }

    pub fn dim(&self) -> usize {
        self.d_inputs + 1
    }
}

/// Threshold at 0.5; ties go to 1.
pub fn quantize(weights_fp: &[f64]) -> BinaryVector {
    weights_fp.iter().map(|&w| w >= 0.5).collect()
}

fn affine(weights: &[f64], x: &[f64]) -> f64 {
    let (bias, w) = weights.split_last().expect("nonempty weights");
    w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + bias
}

/// `output_scale · q(w)·[x; 1]`.
pub fn forward(model: &BnnModel, x: &[f64], output_scale: f64) -> Result<f64> {
    if x.len() != model.d_inputs {
        return Err(Error::DimensionMismatch {
            expected: model.d_inputs,
            actual: x.len(),
        });
    }
    Ok(output_scale * affine(&quantize(&model.weights_fp).to_f64(), x))
}

/// Predictions of the linear map with the given forward weights.
pub fn predict(weights: &[f64], data: &Dataset, output_scale: f64) -> Vec<f64> {
    (0..data.len())
        .map(|i| output_scale * affine(weights, data.row(i)))
        .collect()
}

pub fn mse_loss(predictions: &[f64], targets: &[f64]) -> Result<f64> {
    if predictions.is_empty() {
        return Err(Error::InvalidArgument("loss of an empty batch".into()));
    }
    if predictions.len() != targets.len() {
        return Err(Error::DimensionMismatch {
            expected: predictions.len(),
            actual: targets.len(),
        });
    }
    Ok(predictions
        .iter()
        .zip(targets)
        .map(|(p, t)| (p - t).powi(2))
        .sum::<f64>()
        / predictions.len() as f64)
}

/// Gradient of the mean squared error of `output_scale · v·[x; 1]` with
/// respect to `v`.
pub fn loss_gradient(weights: &[f64], data: &Dataset, output_scale: f64) -> Vec<f64> {
    let n = data.len() as f64;
    let mut grad = vec![0.0; weights.len()];
    for i in 0..data.len() {
        let x = data.row(i);
        let r = output_scale * affine(weights, x) - data.target(i);
        let coef = 2.0 * output_scale * r / n;
        let (g_bias, g) = grad.split_last_mut().expect("nonempty");
        for (gj, xj) in g.iter_mut().zip(x) {
            *gj += coef * xj;
        }
        *g_bias += coef;
    }
    grad
}

/// One full-batch straight-through step: the gradient is evaluated at the
/// binarized weights and applied to the shadow weights, then clamped.
pub fn step_with(model: &BnnModel, binary: &BinaryVector, data: &Dataset, learning_rate: f64, output_scale: f64) -> BnnModel {
    let grad = loss_gradient(&binary.to_f64(), data, output_scale);
    let weights_fp = model
        .weights_fp
        .iter()
        .zip(&grad)
        .map(|(w, g)| (w - learning_rate * g).clamp(0.0, 1.0))
        .collect();
    BnnModel {
        weights_fp,
        d_inputs: model.d_inputs,
    }
}

pub fn grad_step(model: &BnnModel, batch: &Dataset, learning_rate: f64, output_scale: f64) -> Result<BnnModel> {
    if batch.is_empty() {
        return Err(Error::InvalidArgument("empty batch".into()));
    }
    if batch.n_features != model.d_inputs {
        return Err(Error::DimensionMismatch {
            expected: model.d_inputs,
            actual: batch.n_features,
        });
    }
    Ok(step_with(model, &quantize(&model.weights_fp), batch, learning_rate, output_scale))
}
