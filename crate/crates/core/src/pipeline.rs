//! End-to-end hybrid loop on a toy regression with a known binary solution.
//!
//! The normal equations `XᵀX w = Xᵀy` are solved with HHL, the solution
//! state is SWAP-tested against the full uniform state (number of active
//! weights) and against a random mask (Hamming radius), and the resulting
//! sphere is searched classically for the best-fitting vertex.

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::binary::BinaryVector;
use crate::error::{Error, Result};
use crate::hhl::{run_hhl, HhlConfig, LinearSystem};
use crate::overlap::{
    active_count_from_overlap, build_constraint, hamming_radius_from_overlap, overlap_to_distance, prepare_test_state, swap_test,
    TestStateSpec,
};
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineConfig {
    /// Number of weights; a power of two.
    pub n_weights: usize,
    pub clock_qubits: usize,
    /// SWAP-test shots; 0 uses exact probabilities.
    pub shots: u64,
    pub seed: u64,
    pub fidelity_threshold: f64,
    /// Reference mask for the distance test; random when unset.
    pub test_mask: Option<BinaryVector>,
    /// Binary solution of the toy problem; random nonzero when unset.
    pub solution: Option<BinaryVector>,
    /// Search radii `h−1..=h+1` instead of exactly `h`.
    pub widen_radius: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            n_weights: 4,
            clock_qubits: 4,
            shots: 10_000,
            seed: 0,
            fidelity_threshold: 0.99,
            test_mask: None,
            solution: None,
            widen_radius: false,
        }
    }
}

/// `X = diag(√λ) Qᵀ` with `Q` orthogonal, so `XᵀX` has eigenvalues `λ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToyProblem {
    #[serde(serialize_with = "matrix_rows")]
    pub design: DMatrix<f64>,
    pub targets: Vec<f64>,
    pub solution: BinaryVector,
    pub eigenvalues: Vec<f64>,
}

fn matrix_rows<S: serde::Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.nrows()))?;
    for row in m.row_iter() {
        seq.serialize_element(&row.iter().copied().collect::<Vec<f64>>())?;
    }
    seq.end()
}

impl ToyProblem {
    pub fn residual(&self, w: &BinaryVector) -> f64 {
        let v = nalgebra::DVector::from_vec(w.to_f64());
        let r = &self.design * v - nalgebra::DVector::from_column_slice(&self.targets);
        r.norm_squared()
    }

    pub fn normal_equations(&self) -> Result<LinearSystem> {
        let a = self.design.transpose() * &self.design;
        let b = self.design.transpose() * nalgebra::DVector::from_column_slice(&self.targets);
        LinearSystem::from_real(&a, b.as_slice())
    }
}

/// Eigenvalues are distinct integers in `1..=2^{m−1}` and include the top
/// value, so the default evolution time places each on an exact clock value.
pub fn build_toy_problem(
    n_weights: usize,
    clock_qubits: usize,
    solution: Option<BinaryVector>,
    seed: u64,
) -> Result<ToyProblem> {
    if n_weights < 2 || !n_weights.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n_weights));
    }
    if clock_qubits == 0 || clock_qubits > 12 {
        return Err(Error::HhlConfig(format!("clock qubits must be in 1..=12, got {clock_qubits}")));
    }
    let top = 1usize << (clock_qubits - 1);
    if n_weights > top {
        return Err(Error::InvalidArgument(format!(
            "{n_weights} distinct eigenvalues do not fit in 1..={top}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut eigenvalues: Vec<f64> = sample(&mut rng, top - 1, n_weights - 1)
        .into_iter()
        .map(|i| (i + 1) as f64)
        .collect();
    eigenvalues.push(top as f64);

    let gaussian = DMatrix::<f64>::from_fn(n_weights, n_weights, |_, _| rng.sample(StandardNormal));
    let q = gaussian.qr().q();
    let sqrt_l = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n_weights,
        eigenvalues.iter().map(|l| l.sqrt()),
    ));
    let design = sqrt_l * q.transpose();

    let solution = match solution {
        Some(w) if w.len() != n_weights => {
            return Err(Error::DimensionMismatch {
                expected: n_weights,
                actual: w.len(),
            })
        }
        Some(w) if w.count_ones() == 0 => return Err(Error::EmptyMask),
        Some(w) => w,
        None => loop {
            let w = BinaryVector::random(n_weights, &mut rng);
            if w.count_ones() > 0 {
                break w;
            }
        },
    };
    let targets = (&design * nalgebra::DVector::from_vec(solution.to_f64())).as_slice().to_vec();
    Ok(ToyProblem {
        design,
        targets,
        solution,
        eigenvalues,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HhlStage {
    pub success_probability: f64,
    pub fidelity: f64,
    pub amplitudes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwapStage {
    pub reference: BinaryVector,
    pub p0_hat: f64,
    pub overlap_sq: f64,
    /// Squared distance between the normalized states, `2 − 2√overlap_sq`.
    pub distance_sq: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchStage {
    pub hamming_radius: usize,
    /// Squared ±1-encoding distance to the reference, `4h`.
    pub euclid_sq: f64,
    pub radii: Vec<usize>,
    pub admissible: usize,
    pub candidates: usize,
    pub recovered: BinaryVector,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineTrace {
    pub seed: u64,
    pub problem: ToyProblem,
    pub hhl: HhlStage,
    pub count_test: SwapStage,
    pub active_count: usize,
    pub distance_test: SwapStage,
    pub search: SearchStage,
    pub recovered_exactly: bool,
}

fn stage(name: &'static str) -> impl Fn(Error) -> Error {
    move |e| Error::Stage {
        stage: name,
        message: e.to_string(),
    }
}

pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineTrace> {
    let problem = build_toy_problem(config.n_weights, config.clock_qubits, config.solution.clone(), config.seed)
        .map_err(stage("problem"))?;
    let n = config.n_weights;
    let n_qubits = n.trailing_zeros() as usize;

    let system = problem.normal_equations().map_err(stage("hhl"))?;
    let hhl = run_hhl(&system, &HhlConfig::with_clock_qubits(config.clock_qubits)).map_err(stage("hhl"))?;
    let fidelity = hhl.fidelity.unwrap_or(0.0);
    if fidelity < config.fidelity_threshold {
        return Err(Error::Stage {
            stage: "hhl",
            message: format!("fidelity {fidelity:.6} below threshold {}", config.fidelity_threshold),
        });
    }
    let w_state = &hhl.solution_state;
    // remove the global phase so the trace shows real amplitudes
    let pivot = w_state
        .amplitudes()
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("nonempty state");
    let phase = pivot.conj() / pivot.norm();
    let amplitudes = w_state.amplitudes().iter().map(|a| (a * phase).re).collect();

    let uniform = prepare_test_state(&TestStateSpec::FullUniform { n_qubits }).map_err(stage("count"))?;
    let count = swap_test(w_state, &uniform, config.shots, derive_seed(config.seed, 1)).map_err(stage("count"))?;
    let active_count = active_count_from_overlap(count.overlap_sq, n_qubits).max(1);

    let mask = match &config.test_mask {
        Some(m) if m.len() != n => {
            return Err(Error::Stage {
                stage: "distance",
                message: format!("test mask has length {}, expected {n}", m.len()),
            })
        }
        Some(m) => m.clone(),
        None => {
            let mut rng = rng_from_seed(derive_seed(config.seed, 2));
            loop {
                let m = BinaryVector::random(n, &mut rng);
                if m.count_ones() > 0 {
                    break m;
                }
            }
        }
    };
    let test_state =
        prepare_test_state(&TestStateSpec::UniformOverMask { mask: mask.clone() }).map_err(stage("distance"))?;
    let distance =
        swap_test(w_state, &test_state, config.shots, derive_seed(config.seed, 3)).map_err(stage("distance"))?;
    let h = hamming_radius_from_overlap(distance.overlap_sq, active_count, mask.count_ones())
        .map_err(stage("distance"))?;

    let radii: Vec<usize> = if config.widen_radius {
        (h.saturating_sub(1)..=(h + 1).min(n)).collect()
    } else {
        vec![h]
    };
    let mut admissible = Vec::new();
    for &r in &radii {
        admissible.extend(build_constraint(mask.clone(), r).map_err(stage("search"))?.admissible_vertices());
    }
    let mut candidates: Vec<&BinaryVector> = admissible.iter().filter(|v| v.count_ones() == active_count).collect();
    if candidates.is_empty() {
        candidates = admissible.iter().collect();
    }
    let (recovered, residual) = candidates
        .iter()
        .map(|v| ((*v).clone(), problem.residual(v)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::Stage {
            stage: "search",
            message: "no admissible vertex".into(),
        })?;

    Ok(PipelineTrace {
        seed: config.seed,
        hhl: HhlStage {
            success_probability: hhl.success_probability,
            fidelity,
            amplitudes,
        },
        count_test: SwapStage {
            reference: BinaryVector::from_bools(vec![true; n]),
            p0_hat: count.p0_hat,
            overlap_sq: count.overlap_sq,
            distance_sq: overlap_to_distance(&count),
            std_error: count.std_error,
        },
        active_count,
        distance_test: SwapStage {
            reference: mask,
            p0_hat: distance.p0_hat,
            overlap_sq: distance.overlap_sq,
            distance_sq: overlap_to_distance(&distance),
            std_error: distance.std_error,
        },
        search: SearchStage {
            hamming_radius: h,
            euclid_sq: 4.0 * h as f64,
            radii,
            admissible: admissible.len(),
            candidates: candidates.len(),
            recovered: recovered.clone(),
            residual,
        },
        recovered_exactly: recovered == problem.solution,
        problem,
    })
}
