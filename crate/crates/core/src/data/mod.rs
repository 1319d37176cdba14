//! MNIST ingestion for the zero-versus-rest task.

pub mod idx;

use std::env;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;

use crate::binary::BinaryVector;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;
use idx::IdxImages;

/// Environment variable consulted when no data directory is given.
pub const DATA_DIR_ENV: &str = "HHLBNN_DATA_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitTag {
    Full,
    Train,
    Validation,
    Test,
}

/// Row-major images scaled to `[0, 1]` with zero-versus-rest targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub images: Vec<f64>,
    pub n_features: usize,
    pub rows: usize,
    pub cols: usize,
    pub digits: Vec<u8>,
    pub labels: BinaryVector,
    pub split: SplitTag,
}

impl Dataset {
    pub fn from_idx(images: &IdxImages, digits: Vec<u8>, split: SplitTag) -> Result<Self> {
        if images.count != digits.len() {
            return Err(Error::CountMismatch {
                images: images.count,
                labels: digits.len(),
            });
        }
        let labels = digits.iter().map(|&d| d == 0).collect();
        Ok(Dataset {
            images: images.pixels.iter().map(|&b| b as f64 / 255.0).collect(),
            n_features: images.rows * images.cols,
            rows: images.rows,
            cols: images.cols,
            digits,
            labels,
            split,
        })
    }

    /// Dataset from arbitrary feature rows; digits are synthesized as 0 for
    /// positive targets and 1 otherwise.
    pub fn from_features(images: Vec<f64>, n_features: usize, labels: BinaryVector) -> Result<Self> {
        if n_features == 0 || images.len() != n_features * labels.len() {
            return Err(Error::DimensionMismatch {
                expected: n_features * labels.len(),
                actual: images.len(),
            });
        }
        Ok(Dataset {
            images,
            n_features,
            rows: 1,
            cols: n_features,
            digits: labels.iter().map(|b| u8::from(!b)).collect(),
            labels,
            split: SplitTag::Full,
        })
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.images[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn target(&self, i: usize) -> f64 {
        if self.labels.get(i) {
            1.0
        } else {
            0.0
        }
    }

    pub fn targets(&self) -> Vec<f64> {
        self.labels.to_f64()
    }

    /// Fraction of samples labelled as digit zero.
    pub fn positive_fraction(&self) -> f64 {
        self.labels.count_ones() as f64 / self.len() as f64
    }

    pub fn select(&self, indices: &[usize], split: SplitTag) -> Dataset {
        let mut images = Vec::with_capacity(indices.len() * self.n_features);
        for &i in indices {
            images.extend_from_slice(self.row(i));
        }
        let digits: Vec<u8> = indices.iter().map(|&i| self.digits[i]).collect();
        Dataset {
            images,
            n_features: self.n_features,
            rows: self.rows,
            cols: self.cols,
            labels: digits.iter().map(|&d| d == 0).collect(),
            digits,
            split,
        }
    }

    /// Inverse of the pixel scaling.
    pub fn to_idx(&self) -> (IdxImages, Vec<u8>) {
        let pixels = self
            .images
            .iter()
            .map(|&v| (v * 255.0).round().clamp(0.0, 255.0) as u8)
            .collect();
        (
            IdxImages {
                count: self.len(),
                rows: self.rows,
                cols: self.cols,
                pixels,
            },
            self.digits.clone(),
        )
    }
}

pub fn load_idx(images_path: &Path, labels_path: &Path) -> Result<Dataset> {
    let images = idx::read_images(images_path)?;
    let digits = idx::read_labels(labels_path)?;
    Dataset::from_idx(&images, digits, SplitTag::Full)
}

pub fn write_idx(dataset: &Dataset, images_path: &Path, labels_path: &Path) -> Result<()> {
    let (images, digits) = dataset.to_idx();
    idx::write_bytes(images_path, &idx::encode_images(&images))?;
    idx::write_bytes(labels_path, &idx::encode_labels(&digits))
}

/// Seeded shuffle, then the first `val_size` samples become validation.
pub fn split(dataset: &Dataset, val_size: usize, seed: u64) -> Result<(Dataset, Dataset)> {
    if val_size == 0 || val_size >= dataset.len() {
        return Err(Error::InvalidArgument(format!(
            "validation size {val_size} must lie in [1, {})",
            dataset.len()
        )));
    }
    let mut order: Vec<usize> = (0..dataset.len()).collect();
    order.shuffle(&mut rng_from_seed(seed));
    let val = dataset.select(&order[..val_size], SplitTag::Validation);
    let train = dataset.select(&order[val_size..], SplitTag::Train);
    Ok((train, val))
}

/// Which standard MNIST split to look up inside a data directory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MnistPart {
    Train,
    Test,
}

/// Finds `{train,t10k}-{images-idx3,labels-idx1}-ubyte[.gz]` in `dir`.
pub fn locate_mnist(dir: &Path, part: MnistPart) -> Result<(PathBuf, PathBuf)> {
    let stem = match part {
        MnistPart::Train => "train",
        MnistPart::Test => "t10k",
    };
    let find = |kind: &str| -> Result<PathBuf> {
        let base = format!("{stem}-{kind}-ubyte");
        [base.clone(), format!("{base}.gz")]
            .into_iter()
            .map(|name| dir.join(name))
            .find(|p| p.is_file())
            .ok_or_else(|| {
                Error::io(
                    dir.join(&base),
                    std::io::Error::new(std::io::ErrorKind::NotFound, "MNIST file not found"),
                )
            })
    };
    Ok((find("images-idx3")?, find("labels-idx1")?))
}

/// Explicit directory first, then the environment variable.
pub fn resolve_data_dir(explicit: Option<&Path>) -> Option<PathBuf> {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| env::var_os(DATA_DIR_ENV).map(PathBuf::from))
}

pub fn load_mnist(dir: &Path, part: MnistPart) -> Result<Dataset> {
    let (images, labels) = locate_mnist(dir, part)?;
    let mut ds = load_idx(&images, &labels)?;
    ds.split = match part {
        MnistPart::Train => SplitTag::Full,
        MnistPart::Test => SplitTag::Test,
    };
    Ok(ds)
}
