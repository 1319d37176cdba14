use hhlbnn_core::binary::BinaryVector;
use hhlbnn_core::bnn::{emulate_quantum_constraint, grad_step, loss_gradient, mse_loss, predict, project_to_constraint};
use hhlbnn_core::bnn::BnnModel;
use hhlbnn_core::data::{self, idx::IdxImages, Dataset, SplitTag};
use hhlbnn_core::overlap::{
    build_constraint, chained_swap_test, hamming_radius_from_overlap, overlap_to_distance, prepare_test_state,
    swap_test, ChainVariant, TestStateSpec,
};
use hhlbnn_core::sampling::{required_samples, run_sweep, DistributionKind, SamplingOptions};
use hhlbnn_core::{Circuit, GateOp, QuantumState};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn state_strategy(n_qubits: usize) -> impl Strategy<Value = QuantumState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n_qubits).prop_filter_map("zero vector", |v| {
        QuantumState::from_unnormalized(v.into_iter().map(|(r, i)| Complex64::new(r, i)).collect()).ok()
    })
}

fn nonneg_state(n_qubits: usize) -> impl Strategy<Value = QuantumState> {
    prop::collection::vec(0.0f64..1.0, 1 << n_qubits)
        .prop_filter_map("zero vector", |v| QuantumState::from_real_vector(&v).ok())
}

fn random_unitary(k: usize, entries: &[(f64, f64)]) -> DMatrix<Complex64> {
    let dim = 1 << k;
    let m = DMatrix::from_fn(dim, dim, |r, c| {
        let (re, im) = entries[(r * dim + c) % entries.len()];
        Complex64::new(re + if r == c { 0.5 } else { 0.0 }, im)
    });
    m.qr().q()
}

fn gate_strategy(n_qubits: usize) -> impl Strategy<Value = GateOp> {
    (
        1usize..=2.min(n_qubits),
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
        Just((0..n_qubits).collect::<Vec<_>>()).prop_shuffle(),
        any::<bool>(),
    )
        .prop_map(|(k, entries, order, controlled)| {
            let gate = GateOp::new(random_unitary(k, &entries), order[..k].to_vec(), vec![]).unwrap();
            if controlled && order.len() > k {
                gate.controlled_by(&[order[k]]).unwrap()
            } else {
                gate
            }
        })
}

fn circuit_strategy() -> impl Strategy<Value = (QuantumState, Circuit)> {
    (1usize..=4).prop_flat_map(|n| {
        (state_strategy(n), prop::collection::vec(gate_strategy(n), 1..12)).prop_map(move |(s, gates)| {
            let mut c = Circuit::new(n);
            c.extend(gates);
            (s, c)
        })
    })
}

fn mask_of(bits: &[bool]) -> BinaryVector {
    BinaryVector::from_bools(bits.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn gates_preserve_norm((state, circuit) in circuit_strategy()) {
        let mut s = state.clone();
        circuit.apply_to(&mut s).unwrap();
        prop_assert!((s.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn circuit_then_inverse_is_identity((state, circuit) in circuit_strategy()) {
        let mut s = state.clone();
        circuit.apply_to(&mut s).unwrap();
        circuit.inverse().apply_to(&mut s).unwrap();
        for (a, b) in s.amplitudes().iter().zip(state.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn shot_frequencies_converge(state in (1usize..=3).prop_flat_map(state_strategy), seed in any::<u64>()) {
        let qubits: Vec<usize> = (0..state.n_qubits()).collect();
        let exact = state.exact_probabilities(&qubits).unwrap();
        let hist = state.sample_counts(&qubits, 100_000, seed).unwrap();
        prop_assert_eq!(hist.counts.values().sum::<u64>(), 100_000);
        let l1: f64 = hist.frequencies().iter().zip(&exact).map(|(a, b)| (a - b).abs()).sum();
        prop_assert!(l1 < 0.02, "l1 {}", l1);
    }

    #[test]
    fn swap_test_matches_overlap_formula(
        (a, b) in (1usize..=4).prop_flat_map(|n| (state_strategy(n), state_strategy(n)))
    ) {
        let est = swap_test(&a, &b, 0, 0).unwrap();
        let ov = a.inner_product(&b).unwrap().norm_sqr();
        prop_assert!((est.p0_hat - (0.5 + 0.5 * ov)).abs() < 1e-10);
        let rev = swap_test(&b, &a, 0, 0).unwrap();
        prop_assert!((est.p0_hat - rev.p0_hat).abs() < 1e-12);
    }

    #[test]
    fn distance_is_normalized_euclidean(
        (a, b) in (1usize..=4).prop_flat_map(|n| (nonneg_state(n), nonneg_state(n)))
    ) {
        let est = swap_test(&a, &b, 0, 0).unwrap();
        let direct: f64 = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm_sqr()).sum();
        prop_assert!((overlap_to_distance(&est) - direct).abs() < 1e-8);
    }

    #[test]
    fn chained_variants_agree(
        (a, b, c) in (1usize..=2).prop_flat_map(|n| (state_strategy(n), state_strategy(n), state_strategy(n)))
    ) {
        let f = chained_swap_test(&a, [&b, &c], ChainVariant::Fanout, 0, 0).unwrap();
        let g = chained_swap_test(&a, [&b, &c], ChainVariant::Chain, 0, 0).unwrap();
        let ac = a.inner_product(&c).unwrap().norm_sqr();
        let bc = b.inner_product(&c).unwrap().norm_sqr();
        let want = 0.25 * (2.0 + ac + bc);
        prop_assert!((f[1].p0_hat - want).abs() < 1e-10);
        prop_assert!((g[1].p0_hat - want).abs() < 1e-10);
    }

    #[test]
    fn greedy_projection_is_optimal(
        (w, center, h) in (1usize..=10).prop_flat_map(|d| (
            prop::collection::vec(0.0f64..=1.0, d),
            prop::collection::vec(any::<bool>(), d),
            0..=d,
        ))
    ) {
        let k = build_constraint(mask_of(&center), h).unwrap();
        let p = project_to_constraint(&w, &k).unwrap();
        prop_assert_eq!(p.hamming(&k.center), h);
        let cost = |v: &BinaryVector| -> f64 { v.to_f64().iter().zip(&w).map(|(a, b)| (a - b).powi(2)).sum() };
        let best = k.admissible_vertices().iter().map(cost).fold(f64::INFINITY, f64::min);
        prop_assert!(cost(&p) <= best + 1e-12);
    }

    #[test]
    fn ste_gradient_matches_relaxed_finite_differences(
        (x, y, v) in (1usize..=5, 1usize..=6).prop_flat_map(|(d, n)| (
            prop::collection::vec(0.0f64..=1.0, d * n),
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec(0.0f64..=1.0, d + 1),
        )),
        scale in 0.1f64..2.0,
    ) {
        let d = v.len() - 1;
        let data = Dataset::from_features(x, d, mask_of(&y)).unwrap();
        let g = loss_gradient(&v, &data, scale);
        let loss = |w: &[f64]| mse_loss(&predict(w, &data, scale), &data.targets()).unwrap();
        for j in 0..v.len() {
            let h = 1e-5;
            let (mut up, mut dn) = (v.clone(), v.clone());
            up[j] += h;
            dn[j] -= h;
            let fd = (loss(&up) - loss(&dn)) / (2.0 * h);
            prop_assert!((g[j] - fd).abs() <= 1e-5 * fd.abs().max(1e-2), "coord {}: {} vs {}", j, g[j], fd);
        }
    }

    #[test]
    fn weights_stay_in_unit_box(
        (x, y, w) in (1usize..=5, 1usize..=6).prop_flat_map(|(d, n)| (
            prop::collection::vec(0.0f64..=1.0, d * n),
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec(0.0f64..=1.0, d + 1),
        )),
        lr in 0.01f64..100.0,
    ) {
        let d = w.len() - 1;
        let data = Dataset::from_features(x, d, mask_of(&y)).unwrap();
        let mut m = BnnModel::new(w).unwrap();
        for _ in 0..5 {
            m = grad_step(&m, &data, lr, 1.0).unwrap();
            prop_assert!(m.weights_fp.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn idx_round_trip(
        (count, rows, cols) in (1usize..6, 1usize..5, 1usize..5),
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let img = IdxImages { count, rows, cols, pixels: (0..count * rows * cols).map(|_| rng.random()).collect() };
        let digits: Vec<u8> = (0..count).map(|_| rng.random_range(0..10)).collect();
        let ds = Dataset::from_idx(&img, digits, SplitTag::Full).unwrap();
        let dir = tempfile::tempdir().unwrap();
        for ext in ["", ".gz"] {
            let ip = dir.path().join(format!("i{ext}"));
            let lp = dir.path().join(format!("l{ext}"));
            data::write_idx(&ds, &ip, &lp).unwrap();
            prop_assert_eq!(&data::load_idx(&ip, &lp).unwrap(), &ds);
        }
    }

    #[test]
    fn emulated_radius_matches_swap_extraction(
        (w, seed) in (1usize..=3).prop_flat_map(|n| (prop::collection::vec(any::<bool>(), 1 << n), any::<u64>()))
    ) {
        let w = mask_of(&w);
        prop_assume!(w.count_ones() > 0);
        let k = emulate_quantum_constraint(&w, seed);
        prop_assume!(k.center.count_ones() > 0);
        let ws = prepare_test_state(&TestStateSpec::UniformOverMask { mask: w.clone() }).unwrap();
        let cs = prepare_test_state(&TestStateSpec::UniformOverMask { mask: k.center.clone() }).unwrap();
        let est = swap_test(&ws, &cs, 0, 0).unwrap();
        let h = hamming_radius_from_overlap(est.overlap_sq, w.count_ones(), k.center.count_ones()).unwrap();
        prop_assert_eq!(h, k.hamming_radius);
    }
}

/// Expected first time the ±1 walk `X_S = 2k − S` enters `|X_S| ≤ εS`.
fn expected_first_passage(epsilon: f64) -> f64 {
    let limit = 100_000usize;
    let origin = limit + 1;
    let mut probs = vec![0.0f64; 2 * limit + 3];
    let mut next = probs.clone();
    probs[origin] = 1.0;
    let mut expected = 1.0;
    for s in 1..=limit {
        let (lo, hi) = (origin - s, origin + s);
        let mut survive = 0.0;
        for x in lo..=hi {
            let p = 0.5 * (probs[x - 1] + probs[x + 1]);
            let pos = (x as i64 - origin as i64).unsigned_abs() as f64;
            next[x] = if pos > epsilon * s as f64 + 1e-9 { p } else { 0.0 };
            survive += next[x];
        }
        probs[lo - 1..=hi + 1].fill(0.0);
        std::mem::swap(&mut probs, &mut next);
        if survive < 1e-13 {
            break;
        }
        expected += survive;
    }
    expected
}

#[test]
fn two_outcome_uniform_matches_first_passage_oracle() {
    let oracle = expected_first_passage(0.02);
    let sim = required_samples(&[0.5, 0.5], 0.02, 2000, 17).unwrap().required_samples;
    println!("first passage oracle {oracle:.2}, simulated {sim:.2}");
    assert!(sim > oracle / 2.0 && sim < oracle * 2.0);
}

#[test]
fn sweep_is_deterministic() {
    let run = || {
        run_sweep(
            &[DistributionKind::Random, DistributionKind::Uniform],
            &[2, 4, 8],
            &[0.05, 0.1],
            5,
            42,
            &SamplingOptions::default(),
        )
        .unwrap()
    };
    assert_eq!(run(), run());
}
