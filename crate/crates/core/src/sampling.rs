//! How many measurement shots it takes to reconstruct a distribution.
//!
//! For each trial, a sample path is drawn and the smallest shot count `S`
//! whose empirical distribution lies within L1 distance `ε` of the source is
//! recorded; results report the mean and standard deviation over trials.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed, SimRng};

/// Note attached to uniform rows: in the noiseless case a uniform result for
/// `k` outcomes also holds for any distribution with `k` equiprobable
/// nonzero entries, since zero-probability outcomes are never drawn.
pub const SUPPORT_EQUIVALENCE_NOTE: &str =
    "uniform over k outcomes also covers any noiseless distribution with k equiprobable nonzero entries";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DistributionKind {
    Random,
    Uniform,
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistributionKind::Random => "random",
            DistributionKind::Uniform => "uniform",
        })
    }
}

impl FromStr for DistributionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "random" => Ok(DistributionKind::Random),
            "uniform" => Ok(DistributionKind::Uniform),
            other => Err(Error::InvalidArgument(format!("unknown distribution kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistributionSpec {
    pub kind: DistributionKind,
    pub size: usize,
    pub seed: u64,
}

pub fn generate_distribution(spec: &DistributionSpec) -> Result<Vec<f64>> {
    if !(2..=32).contains(&spec.size) {
        return Err(Error::DistributionSize(spec.size));
    }
    match spec.kind {
        DistributionKind::Uniform => Ok(vec![1.0 / spec.size as f64; spec.size]),
        DistributionKind::Random => {
            let mut rng = rng_from_seed(spec.seed);
            // 1 - U lies in (0, 1], so every entry is strictly positive
            let raw: Vec<f64> = (0..spec.size).map(|_| 1.0 - rng.random::<f64>()).collect();
            let total: f64 = raw.iter().sum();
            Ok(raw.into_iter().map(|v| v / total).collect())
        }
    }
}

pub fn l1_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            actual: q.len(),
        });
    }
    Ok(p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum())
}

/// How the minimal shot count of one trial is located.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStrategy {
    /// Grow one sample path shot by shot and stop at the first `S` whose
    /// running empirical distribution is within `ε`.
    #[default]
    PrefixPath,
    /// Doubling then bisection over `S`, drawing a fresh sample of size `S`
    /// for every candidate.
    DoublingBisection,
}

impl FromStr for SearchStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "prefix" | "prefix-path" => Ok(SearchStrategy::PrefixPath),
            "bisection" | "doubling-bisection" => Ok(SearchStrategy::DoublingBisection),
            other => Err(Error::InvalidArgument(format!("unknown search strategy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingOptions {
    pub strategy: SearchStrategy,
    /// Per-trial ceiling on `S`; a trial that reaches it reports the cap.
    pub max_samples: u64,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        SamplingOptions {
            strategy: SearchStrategy::PrefixPath,
            max_samples: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplingResult {
    pub size: usize,
    pub epsilon: f64,
    /// Mean over trials of the per-trial minimal shot count.
    pub required_samples: f64,
    pub std_samples: f64,
    pub trials: usize,
    pub seed: u64,
    #[serde(skip)]
    pub per_trial: Vec<u64>,
}

/// Mean minimal shot count to reach L1 error `epsilon`, over `trials`
/// independent sample paths. Trial `i` draws from stream
/// `derive_seed(seed, i)`.
pub fn required_samples(dist: &[f64], epsilon: f64, trials: usize, seed: u64) -> Result<SamplingResult> {
    required_samples_with(dist, epsilon, trials, seed, &SamplingOptions::default())
}

pub fn required_samples_with(
    dist: &[f64],
    epsilon: f64,
    trials: usize,
    seed: u64,
    options: &SamplingOptions,
) -> Result<SamplingResult> {
    if !(epsilon > 0.0 && epsilon < 2.0) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} outside (0, 2)")));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if dist.is_empty() || (dist.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument("distribution must be nonempty and sum to 1".into()));
    }
    let per_trial: Vec<u64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_from_seed(derive_seed(seed, t as u64));
            match options.strategy {
                SearchStrategy::PrefixPath => prefix_first_hit(dist, epsilon, options.max_samples, &mut rng),
                SearchStrategy::DoublingBisection => doubling_bisection(dist, epsilon, options.max_samples, &mut rng),
            }
        })
        .collect();
    let n = per_trial.len() as f64;
    let mean = per_trial.iter().map(|&s| s as f64).sum::<f64>() / n;
    let var = if per_trial.len() > 1 {
        per_trial.iter().map(|&s| (s as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(SamplingResult {
        size: dist.len(),
        epsilon,
        required_samples: mean,
        std_samples: var.sqrt(),
        trials,
        seed,
        per_trial,
    })
}

fn cumulative(dist: &[f64]) -> Vec<f64> {
    dist.iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect()
}

fn draw(cdf: &[f64], rng: &mut SimRng) -> usize {
    let u = rng.random::<f64>() * cdf[cdf.len() - 1];
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

/// Absorbs roundoff in `c/S − p` so that a distance exactly on the target
/// counts as reached.
const L1_SLACK: f64 = 1e-12;

fn empirical_l1(counts: &[u64], total: u64, dist: &[f64]) -> f64 {
    let s = total as f64;
    counts
        .iter()
        .zip(dist)
        .map(|(&c, p)| (c as f64 / s - p).abs())
        .sum()
}

fn prefix_first_hit(dist: &[f64], epsilon: f64, cap: u64, rng: &mut SimRng) -> u64 {
    let cdf = cumulative(dist);
    let mut counts = vec![0u64; dist.len()];
    for s in 1..=cap {
        counts[draw(&cdf, rng)] += 1;
        if empirical_l1(&counts, s, dist) <= epsilon + L1_SLACK {
            return s;
        }
    }
    cap
}

/// Multinomial sample of size `s` via conditional binomials.
fn multinomial(dist: &[f64], s: u64, rng: &mut SimRng) -> Vec<u64> {
    let mut remaining = s;
    let mut mass = 1.0;
    let mut counts = Vec::with_capacity(dist.len());
    for (i, &p) in dist.iter().enumerate() {
        if i == dist.len() - 1 || remaining == 0 {
            counts.push(if i == dist.len() - 1 { remaining } else { 0 });
            continue;
        }
        let q = (p / mass).clamp(0.0, 1.0);
        let c = Binomial::new(remaining, q).expect("valid binomial").sample(rng);
        counts.push(c);
        remaining -= c;
        mass -= p;
    }
    counts
}

fn doubling_bisection(dist: &[f64], epsilon: f64, cap: u64, rng: &mut SimRng) -> u64 {
    let passes = |s: u64, rng: &mut SimRng| empirical_l1(&multinomial(dist, s, rng), s, dist) <= epsilon + L1_SLACK;
    let mut hi = 1u64;
    while !passes(hi, rng) {
        if hi >= cap {
            return cap;
        }
        hi = (hi * 2).min(cap);
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if passes(mid, rng) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// One row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub kind: DistributionKind,
    pub size: usize,
    pub epsilon: f64,
    pub trials: usize,
    pub mean_samples: f64,
    pub std_samples: f64,
    pub seed: u64,
}

impl SweepRow {
    pub fn note(&self) -> Option<&'static str> {
        (self.kind == DistributionKind::Uniform).then_some(SUPPORT_EQUIVALENCE_NOTE)
    }
}

/// Full `kinds × sizes × epsilons` grid.
///
/// The distribution and the per-trial sample paths depend only on
/// `(seed, kind, size)`, so every epsilon reuses the same paths.
pub fn run_sweep(
    kinds: &[DistributionKind],
    sizes: &[usize],
    epsilons: &[f64],
    trials: usize,
    seed: u64,
    options: &SamplingOptions,
) -> Result<Vec<SweepRow>> {
    if kinds.is_empty() || sizes.is_empty() || epsilons.is_empty() {
        return Err(Error::InvalidArgument("sweep lists must be nonempty".into()));
    }
    let mut rows = Vec::new();
    for &kind in kinds {
        for &size in sizes {
            let cell_seed = derive_seed(seed, (kind as u64) << 32 | size as u64);
            let dist = generate_distribution(&DistributionSpec {
                kind,
                size,
                seed: cell_seed,
            })?;
            for &epsilon in epsilons {
                let r = required_samples_with(&dist, epsilon, trials, derive_seed(cell_seed, 1), options)?;
                rows.push(SweepRow {
                    kind,
                    size,
                    epsilon,
                    trials,
                    mean_samples: r.required_samples,
                    std_samples: r.std_samples,
                    seed: cell_seed,
                });
            }
        }
    }
    Ok(rows)
}

/// CSV with header `kind,size,epsilon,trials,mean_samples,std_samples,seed`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}
