use std::path::{Path, PathBuf};

use hhlbnn_core::data::{self, locate_mnist, MnistPart, DATA_DIR_ENV};

fn bundled_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/mnist-subset")
}

#[test]
fn bundled_subset_shape_and_prevalence() {
    let ds = data::load_mnist(&bundled_dir(), MnistPart::Train).unwrap();
    assert_eq!(ds.len(), 10_000);
    assert_eq!((ds.rows, ds.cols, ds.n_features), (28, 28, 784));
    assert_eq!(ds.labels.count_ones(), 1001);
    assert!((ds.positive_fraction() - 0.1001).abs() < 1e-12);
    assert!(ds.images.iter().all(|&p| (0.0..=1.0).contains(&p)));
    let mut hist = [0usize; 10];
    for &d in &ds.digits {
        hist[d as usize] += 1;
    }
    assert_eq!(hist, [1001, 1127, 991, 1032, 980, 863, 1014, 1070, 944, 978]);
}

#[test]
fn bundled_subset_default_split() {
    let ds = data::load_mnist(&bundled_dir(), MnistPart::Train).unwrap();
    let (train, val) = data::split(&ds, ds.len() / 10, 7).unwrap();
    assert_eq!((train.len(), val.len()), (9000, 1000));
    let pos = train.labels.count_ones() + val.labels.count_ones();
    assert_eq!(pos, 1001);
}

fn full_dir() -> Option<PathBuf> {
    let dir = PathBuf::from(std::env::var_os(DATA_DIR_ENV)?);
    locate_mnist(&dir, MnistPart::Train).ok()?;
    Some(dir)
}

#[test]
fn full_training_set_when_available() {
    let Some(dir) = full_dir() else {
        eprintln!("skipped: {DATA_DIR_ENV} does not point at the full training files");
        return;
    };
    let ds = data::load_mnist(&dir, MnistPart::Train).unwrap();
    if ds.len() != 60_000 {
        eprintln!("skipped: {} samples, not the full training set", ds.len());
        return;
    }
    assert_eq!(ds.n_features, 784);
    assert!((ds.positive_fraction() - 0.0987).abs() <= 0.002);
}
