use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::QuantumState;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Result of measuring one qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub outcome: bool,
    pub collapsed: QuantumState,
    /// Born probability of `outcome` before the measurement.
    pub probability: f64,
}

/// Outcome counts over a measured qubit subset.
///
/// Keys are bitstrings with the first measured qubit as the rightmost
/// character, so the key read as a binary number is the marginal index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShotHistogram {
    pub qubits: Vec<usize>,
    pub counts: BTreeMap<String, u64>,
    pub total_shots: u64,
    pub seed: u64,
}

impl ShotHistogram {
    /// Count for a marginal outcome index.
    pub fn count(&self, outcome: usize) -> u64 {
        self.counts
            .get(&bitstring(outcome, self.qubits.len()))
            .copied()
            .unwrap_or(0)
    }

    /// Empirical frequencies indexed by marginal outcome.
    pub fn frequencies(&self) -> Vec<f64> {
        (0..1usize << self.qubits.len())
            .map(|o| self.count(o) as f64 / self.total_shots as f64)
            .collect()
    }
}

pub(crate) fn bitstring(outcome: usize, width: usize) -> String {
    (0..width)
        .rev()
        .map(|j| if outcome >> j & 1 == 1 { '1' } else { '0' })
        .collect()
}

impl QuantumState {
    /// Exact marginal Born distribution on `qubits`; entry `k` is the
    /// probability that `qubits[j]` reads bit `j` of `k` for every `j`.
    pub fn exact_probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        if qubits.is_empty() {
            return Err(Error::EmptyQubitList);
        }
        for &q in qubits {
            self.check_qubit(q)?;
        }
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (index, amp) in self.amplitudes().iter().enumerate() {
            let outcome = qubits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (j, &q)| acc | ((index >> q & 1) << j));
            probs[outcome] += amp.norm_sqr();
        }
        Ok(probs)
    }

    /// Samples one qubit per the Born rule and collapses the state.
    pub fn measure_qubit(&self, qubit: usize, rng_seed: u64) -> Result<Measurement> {
        let p1 = self.outcome_probability(qubit, true)?;
        let mut rng = rng_from_seed(rng_seed);
        let outcome = rng.random::<f64>() < p1;
        let (probability, collapsed) = self.project(qubit, outcome)?;
        Ok(Measurement {
            outcome,
            collapsed,
            probability,
        })
    }

    /// Draws `shots` i.i.d. outcomes from the marginal on `qubits`.
    pub fn sample_counts(&self, qubits: &[usize], shots: u64, rng_seed: u64) -> Result<ShotHistogram> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let probs = self.exact_probabilities(qubits)?;
        let cumulative: Vec<f64> = probs
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        let total = *cumulative.last().expect("nonempty");
        let mut tallies = vec![0u64; probs.len()];
        let mut rng = rng_from_seed(rng_seed);
        for _ in 0..shots {
            let u = rng.random::<f64>() * total;
            let k = cumulative.partition_point(|&c| c <= u).min(probs.len() - 1);
            tallies[k] += 1;
        }
        let counts = tallies
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| (bitstring(k, qubits.len()), c))
            .collect();
        Ok(ShotHistogram {
            qubits: qubits.to_vec(),
            counts,
            total_shots: shots,
            seed: rng_seed,
        })
    }
}
