//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hhlbnn_core::binary::BinaryVector;
use hhlbnn_core::bnn::{project_to_constraint, TrainConfig};
use hhlbnn_core::data::{self, MnistPart};
use hhlbnn_core::experiment::{run_experiment, summarize, ExperimentConfig};
use hhlbnn_core::hhl::{run_hhl, HhlConfig, LinearSystem};
use hhlbnn_core::overlap::{
    build_constraint, chained_swap_test, estimate_active_count, prepare_test_state, swap_test, ChainVariant,
    TestStateSpec,
};
use hhlbnn_core::pipeline::{run_pipeline, PipelineConfig};
use hhlbnn_core::rng::{derive_seed, rng_from_seed, SimRng};
use hhlbnn_core::sampling::{run_sweep, DistributionKind, SamplingOptions, SweepRow};
use hhlbnn_core::QuantumState;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

type Criterion = (&'static str, fn() -> Outcome, Duration);

struct Outcome {
    pass: bool,
    detail: String,
}

fn random_state(n: usize, rng: &mut SimRng) -> QuantumState {
    let amps = (0..1usize << n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    QuantumState::from_unnormalized(amps).unwrap()
}

fn swap_exactness() -> Outcome {
    let mut rng = rng_from_seed(1);
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let n = 1 + i % 6;
        let a = random_state(n, &mut rng);
        let b = random_state(n, &mut rng);
        let p0 = swap_test(&a, &b, 0, 0).unwrap().p0_hat;
        let want = 0.5 + 0.5 * a.inner_product(&b).unwrap().norm_sqr();
        worst = worst.max((p0 - want).abs());
    }
    Outcome {
        pass: worst <= 1e-10,
        detail: format!("max |p0 - (1 + |<A|B>|^2)/2| = {worst:.2e} over 1000 pairs, 1-6 qubits"),
    }
}

fn hhl_proof_of_concept() -> Outcome {
    let two = LinearSystem::from_rows(&[&[1.5, 0.5], &[0.5, 1.5]], &[1.0, 0.0]).unwrap();
    let four = LinearSystem::from_rows(
        &[
            &[3.75, -1.25, -2.25, 0.75],
            &[-1.25, 3.75, 0.75, -2.25],
            &[-2.25, 0.75, 3.75, -1.25],
            &[0.75, -2.25, -1.25, 3.75],
        ],
        &[1.0, 0.0, 0.0, 0.0],
    )
    .unwrap();
    let config = HhlConfig::default();
    let f2 = run_hhl(&two, &config).unwrap().fidelity.unwrap();
    let f4 = run_hhl(&four, &config).unwrap().fidelity.unwrap();
    Outcome {
        pass: f2 >= 0.99 && f4 >= 0.99,
        detail: format!("fidelity 2x2 = {f2:.6}, 4x4 = {f4:.6} (m = 4)"),
    }
}

fn orthonormal_pair(n: usize, rng: &mut SimRng) -> (QuantumState, QuantumState) {
    let b = random_state(n, rng);
    let c = random_state(n, rng);
    let overlap = b.inner_product(&c).unwrap();
    let perp: Vec<Complex64> = c
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(ci, bi)| ci - overlap * bi)
        .collect();
    (b, QuantumState::from_unnormalized(perp).unwrap())
}

fn chained_bound() -> Outcome {
    let mut rng = rng_from_seed(3);
    let mut worst = 0.0f64;
    let mut max_p0 = 0.0f64;
    for i in 0..200 {
        let n = 1 + i % 3;
        let a = random_state(n, &mut rng);
        let (b, c) = orthonormal_pair(n, &mut rng);
        let ac = a.inner_product(&c).unwrap().norm_sqr();
        for variant in [ChainVariant::Fanout, ChainVariant::Chain] {
            let p0 = chained_swap_test(&a, [&b, &c], variant, 0, 0).unwrap()[1].p0_hat;
            worst = worst.max((p0 - 0.25 * (2.0 + ac)).abs());
            max_p0 = max_p0.max(p0);
        }
    }
    Outcome {
        pass: worst <= 1e-10 && max_p0 <= 0.75 + 1e-12,
        detail: format!("max deviation {worst:.2e}, max p0 {max_p0:.6} over 200 A, both wirings"),
    }
}

fn cell(rows: &[SweepRow], kind: DistributionKind, size: usize, eps: f64) -> f64 {
    rows.iter()
        .find(|r| r.kind == kind && r.size == size && r.epsilon == eps)
        .unwrap()
        .mean_samples
}

fn sampling_study() -> Outcome {
    let kinds = [DistributionKind::Random, DistributionKind::Uniform];
    let sizes = [2, 4, 8, 16, 32];
    let eps = [0.02, 0.05];
    let rows = run_sweep(&kinds, &sizes, &eps, 20, 0, &SamplingOptions::default()).unwrap();
    let r2 = cell(&rows, DistributionKind::Random, 2, 0.02);
    let r32 = cell(&rows, DistributionKind::Random, 32, 0.02);
    let u16 = cell(&rows, DistributionKind::Uniform, 16, 0.05);
    let monotone = kinds.iter().all(|&k| {
        eps.iter().all(|&e| {
            sizes
                .windows(2)
                .all(|w| cell(&rows, k, w[0], e) <= cell(&rows, k, w[1], e))
        })
    });
    Outcome {
        pass: (30.0..=260.0).contains(&r2) && (15_000.0..=135_000.0).contains(&r32) && u16 > 1000.0 && monotone,
        detail: format!(
            "random-2 @2% = {r2:.1}, random-32 @2% = {r32:.0}, uniform-16 @5% = {u16:.0}, monotone in size = {monotone} (trials = 20)"
        ),
    }
}

fn projection_oracle() -> Outcome {
    let mut rng = rng_from_seed(5);
    let mut cases = 0usize;
    let mut mismatches = 0usize;
    for d in 1..=12usize {
        for h in 0..=d {
            for _ in 0..100 {
                let w: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
                let center = BinaryVector::random(d, &mut rng);
                let k = build_constraint(center, h).unwrap();
                let cost = |v: &BinaryVector| -> f64 { v.to_f64().iter().zip(&w).map(|(a, b)| (a - b).powi(2)).sum() };
                let greedy = project_to_constraint(&w, &k).unwrap();
                let best = k.admissible_vertices().iter().map(cost).fold(f64::INFINITY, f64::min);
                if !k.admits(&greedy) || cost(&greedy) > best + 1e-12 {
                    mismatches += 1;
                }
                cases += 1;
            }
        }
    }
    Outcome {
        pass: mismatches == 0,
        detail: format!("{mismatches} mismatches in {cases} cases (D = 1..12, every h, 100 vectors each)"),
    }
}

fn data_dir() -> PathBuf {
    data::resolve_data_dir(None)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/mnist-subset")))
}

fn mnist_acceleration() -> Outcome {
    let dir = data_dir();
    let dataset = data::load_mnist(&dir, MnistPart::Train).unwrap();
    let (train_set, validation) = data::split(&dataset, dataset.len() / 10, derive_seed(0, u64::MAX)).unwrap();
    let config = ExperimentConfig {
        runs: 100,
        train: TrainConfig::default(),
        seed: 0,
        jobs: None,
    };
    let runs = run_experiment(&train_set, &validation, &config).unwrap();
    let s = summarize(&runs, &config);
    Outcome {
        pass: s.mean_constrained < s.mean_baseline
            && (0.15..=0.50).contains(&s.improvement_ratio)
            && s.frac_equal_or_better >= 0.55,
        detail: format!(
            "{} runs on {} train / {} val: baseline {:.2} vs constrained {:.2} iterations, ratio {:.3} (band 0.15-0.50), equal-or-better {:.2}",
            s.runs,
            train_set.len(),
            validation.len(),
            s.mean_baseline,
            s.mean_constrained,
            s.improvement_ratio,
            s.frac_equal_or_better
        ),
    }
}

fn exhaustive_best(trace: &hhlbnn_core::pipeline::PipelineTrace) -> BinaryVector {
    let n = trace.problem.solution.len();
    (0..1usize << n)
        .map(|m| (0..n).map(|j| (m >> j) & 1 == 1).collect::<BinaryVector>())
        .min_by(|a, b| trace.problem.residual(a).total_cmp(&trace.problem.residual(b)))
        .unwrap()
}

fn hybrid_pipeline() -> Outcome {
    let mut recovered = 0;
    for seed in 0..10 {
        let t = run_pipeline(&PipelineConfig {
            seed,
            ..PipelineConfig::default()
        })
        .unwrap();
        if t.recovered_exactly && t.search.recovered == exhaustive_best(&t) {
            recovered += 1;
        }
    }
    Outcome {
        pass: recovered == 10,
        detail: format!("{recovered}/10 toy instances recovered (4 weights, 10^4 shots per SWAP test)"),
    }
}

fn count_estimation() -> Outcome {
    let mut exact_errors = 0usize;
    let mut exact_cases = 0usize;
    for n in 1..=4usize {
        let dim = 1usize << n;
        for m in 1..(1u64 << dim) {
            let mask: BinaryVector = (0..dim).map(|j| (m >> j) & 1 == 1).collect();
            let w = prepare_test_state(&TestStateSpec::UniformOverMask { mask: mask.clone() }).unwrap();
            if estimate_active_count(&w, 0, 0).unwrap() != mask.count_ones() {
                exact_errors += 1;
            }
            exact_cases += 1;
        }
    }
    let mut rng = rng_from_seed(8);
    for count in 1..=32usize {
        for _ in 0..20 {
            let mut bits = vec![false; 32];
            for i in rand::seq::index::sample(&mut rng, 32, count) {
                bits[i] = true;
            }
            let w = prepare_test_state(&TestStateSpec::UniformOverMask {
                mask: BinaryVector::from_bools(bits),
            })
            .unwrap();
            if estimate_active_count(&w, 0, 0).unwrap() != count {
                exact_errors += 1;
            }
            exact_cases += 1;
        }
    }
    let mut within = 0;
    for trial in 0..100u64 {
        let mut trng = rng_from_seed(derive_seed(9, trial));
        let mask = loop {
            let m = BinaryVector::random(32, &mut trng);
            if m.count_ones() > 0 {
                break m;
            }
        };
        let w = prepare_test_state(&TestStateSpec::UniformOverMask { mask: mask.clone() }).unwrap();
        let est = estimate_active_count(&w, 10_000, derive_seed(10, trial)).unwrap();
        if est.abs_diff(mask.count_ones()) <= 1 {
            within += 1;
        }
    }
    Outcome {
        pass: exact_errors == 0 && within >= 95,
        detail: format!(
            "exact mode: {exact_errors} errors in {exact_cases} masks (all masks n <= 4, every count at n = 5); 10^4 shots: {within}/100 within +-1"
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("SWAP-test exactness", swap_exactness, Duration::from_secs(10)),
        ("HHL proof of concept", hhl_proof_of_concept, Duration::from_secs(5)),
        ("chained SWAP bound", chained_bound, Duration::from_secs(10)),
        ("sampling study", sampling_study, Duration::from_secs(600)),
        ("projection oracle equivalence", projection_oracle, Duration::from_secs(60)),
        ("MNIST acceleration", mnist_acceleration, Duration::from_secs(1800)),
        ("end-to-end hybrid pipeline", hybrid_pipeline, Duration::from_secs(60)),
        ("count estimation", count_estimation, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let pass = outcome.pass && elapsed <= *budget;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {} {} {name}: {} [{:.1} s, budget {} s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
