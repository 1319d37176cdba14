//! Paired baseline/constrained training runs on the zero-versus-rest task.
//!
//! Each run trains a baseline from a seeded initialization, takes its
//! solution `w*`, emulates the extracted Hamming constraint around a random
//! center, and retrains from the same initialization on that sphere.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::bnn::{emulate_quantum_constraint, train, TrainConfig, TrainReport};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub runs: usize,
    /// Initialization seeds are derived per run; `train.seed` is ignored.
    pub train: TrainConfig,
    pub seed: u64,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            runs: 100,
            train: TrainConfig::default(),
            seed: 0,
            jobs: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedRun {
    pub run_id: usize,
    pub seed: u64,
    pub h: usize,
    pub baseline: TrainReport,
    pub constrained: TrainReport,
    /// First constrained epoch whose validation loss is at most the baseline
    /// best, or the constrained best epoch if it never gets there.
    pub constrained_iterations: usize,
    pub equal_or_better: bool,
}

/// One CSV row; every run contributes a baseline and a constrained row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRow {
    pub run_id: usize,
    pub constrained: bool,
    pub iterations: usize,
    pub final_val_loss: f64,
    pub converged: bool,
    pub seed: u64,
    pub h: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub runs: usize,
    pub mean_baseline: f64,
    pub mean_constrained: f64,
    /// `1 − mean_constrained / mean_baseline`.
    pub improvement_ratio: f64,
    pub frac_equal_or_better: f64,
    pub mean_baseline_loss: f64,
    pub mean_constrained_loss: f64,
    pub worse_runs: usize,
    /// Constrained minus baseline loss over runs where the constrained arm
    /// ended worse.
    pub mean_mse_gap_worse: Option<f64>,
    pub max_mse_gap_worse: Option<f64>,
    pub mean_h: f64,
    pub learning_rate: f64,
    pub patience: usize,
    pub seed: u64,
}

pub fn run_pair(run_id: usize, train_set: &Dataset, validation: &Dataset, config: &ExperimentConfig) -> Result<PairedRun> {
    let seed = derive_seed(config.seed, run_id as u64);
    let train_config = TrainConfig {
        seed: derive_seed(seed, 0),
        ..config.train
    };
    let baseline = train(train_set, validation, &train_config, None)?;
    let constraint = emulate_quantum_constraint(&baseline.solution, derive_seed(seed, 1));
    let constrained = train(train_set, validation, &train_config, Some(&constraint))?;
    let constrained_iterations = constrained
        .first_epoch_reaching(baseline.final_val_loss)
        .unwrap_or(constrained.iterations);
    Ok(PairedRun {
        run_id,
        seed,
        h: constraint.hamming_radius,
        equal_or_better: constrained.final_val_loss <= baseline.final_val_loss,
        baseline,
        constrained,
        constrained_iterations,
    })
}

pub fn run_experiment(train_set: &Dataset, validation: &Dataset, config: &ExperimentConfig) -> Result<Vec<PairedRun>> {
    if config.runs == 0 {
        return Err(Error::InvalidArgument("runs must be at least 1".into()));
    }
    config.train.validate()?;
    let work = || {
        (0..config.runs)
            .into_par_iter()
            .map(|i| run_pair(i, train_set, validation, config))
            .collect::<Result<Vec<_>>>()
    };
    match config.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(work),
        None => work(),
    }
}

pub fn rows(runs: &[PairedRun]) -> Vec<RunRow> {
    runs.iter()
        .flat_map(|r| {
            [
                RunRow {
                    run_id: r.run_id,
                    constrained: false,
                    iterations: r.baseline.iterations,
                    final_val_loss: r.baseline.final_val_loss,
                    converged: r.baseline.converged,
                    seed: r.seed,
                    h: r.h,
                },
                RunRow {
                    run_id: r.run_id,
                    constrained: true,
                    iterations: r.constrained_iterations,
                    final_val_loss: r.constrained.final_val_loss,
                    converged: r.constrained.converged,
                    seed: r.seed,
                    h: r.h,
                },
            ]
        })
        .collect()
}

pub fn summarize(runs: &[PairedRun], config: &ExperimentConfig) -> ExperimentSummary {
    let n = runs.len() as f64;
    let mean = |f: &dyn Fn(&PairedRun) -> f64| runs.iter().map(f).sum::<f64>() / n;
    let mean_baseline = mean(&|r| r.baseline.iterations as f64);
    let mean_constrained = mean(&|r| r.constrained_iterations as f64);
    let gaps: Vec<f64> = runs
        .iter()
        .filter(|r| !r.equal_or_better)
        .map(|r| r.constrained.final_val_loss - r.baseline.final_val_loss)
        .collect();
    ExperimentSummary {
        runs: runs.len(),
        mean_baseline,
        mean_constrained,
        improvement_ratio: 1.0 - mean_constrained / mean_baseline,
        frac_equal_or_better: runs.iter().filter(|r| r.equal_or_better).count() as f64 / n,
        mean_baseline_loss: mean(&|r| r.baseline.final_val_loss),
        mean_constrained_loss: mean(&|r| r.constrained.final_val_loss),
        worse_runs: gaps.len(),
        mean_mse_gap_worse: (!gaps.is_empty()).then(|| gaps.iter().sum::<f64>() / gaps.len() as f64),
        max_mse_gap_worse: gaps.iter().copied().reduce(f64::max),
        mean_h: mean(&|r| r.h as f64),
        learning_rate: config.train.learning_rate,
        patience: config.train.patience,
        seed: config.seed,
    }
}

/// CSV with header `run_id,constrained,iterations,final_val_loss,converged,seed,h`.
pub fn write_runs_csv<W: Write>(runs: &[PairedRun], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows(runs) {
        writer.serialize(row)?;
    }
    writer.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::BinaryVector;
    use rand::Rng;

    fn synthetic(n: usize, d: usize, seed: u64) -> Dataset {
        let mut rng = crate::rng::rng_from_seed(seed);
        let w: Vec<bool> = (0..d).map(|j| j % 3 == 0).collect();
        let mut images = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..n {
            let x: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
            let s: f64 = x.iter().zip(&w).filter(|(_, &b)| b).map(|(v, _)| v).sum();
            labels.push(s > d as f64 / 6.0);
            images.extend(x);
        }
        Dataset::from_features(images, d, BinaryVector::from_bools(labels)).unwrap()
    }

    fn config(runs: usize) -> ExperimentConfig {
        ExperimentConfig {
            runs,
            train: TrainConfig {
                learning_rate: 20.0,
                ..TrainConfig::default()
            },
            seed: 5,
            jobs: Some(2),
        }
    }

    #[test]
    fn single_run_is_deterministic() {
        let (t, v) = (synthetic(200, 12, 1), synthetic(60, 12, 2));
        let a = run_experiment(&t, &v, &config(1)).unwrap();
        let b = run_experiment(&t, &v, &config(1)).unwrap();
        assert_eq!(a, b);
        assert!(a[0].constrained_iterations <= a[0].constrained.val_history.len());
    }

    #[test]
    fn rows_are_in_run_order_and_csv_has_header() {
        let (t, v) = (synthetic(120, 8, 3), synthetic(40, 8, 4));
        let runs = run_experiment(&t, &v, &config(4)).unwrap();
        let ids: Vec<usize> = rows(&runs).iter().map(|r| r.run_id).collect();
        assert_eq!(ids, vec![0, 0, 1, 1, 2, 2, 3, 3]);
        let mut buf = Vec::new();
        write_runs_csv(&runs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("run_id,constrained,iterations,final_val_loss,converged,seed,h\n"));
        let s = summarize(&runs, &config(4));
        assert_eq!(s.runs, 4);
        assert!((0.0..=1.0).contains(&s.frac_equal_or_better));
        assert_eq!(s.worse_runs, runs.iter().filter(|r| !r.equal_or_better).count());
    }

    #[test]
    fn zero_runs_rejected() {
        let d = synthetic(10, 4, 0);
        assert!(run_experiment(&d, &d, &config(0)).is_err());
    }
}
