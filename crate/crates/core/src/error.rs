use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("basis index {index} out of range for {n_qubits} qubits")]
    BasisIndex { index: usize, n_qubits: usize },

    #[error("cannot build a state from a zero vector")]
    ZeroVector,

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("gate matrix is not unitary (deviation {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    #[error("invalid qubit index {qubit} for a {n_qubits}-qubit state")]
    QubitIndex { qubit: usize, n_qubits: usize },

    #[error("invalid gate layout: {0}")]
    GateLayout(String),

    #[error("qubit list must not be empty")]
    EmptyQubitList,

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("matrix is singular (smallest singular value {0:.3e})")]
    Singular(f64),

    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid HHL configuration: {0}")]
    HhlConfig(String),

    #[error("eigenvalue {eigenvalue} maps to clock value 0; increase clock qubits or evolution time")]
    ZeroClockValue { eigenvalue: f64 },

    #[error("post-selection success probability {0:.3e} is too small")]
    DegenerateSuccess(f64),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("test-state mask has no set entries")]
    EmptyMask,

    #[error("inconsistent overlap: intersection {intersection:.3} exceeds min({n_w}, {n_t})")]
    InconsistentOverlap { intersection: f64, n_w: usize, n_t: usize },

    #[error("hamming radius {h} out of range for dimension {dim}")]
    RadiusOutOfRange { h: usize, dim: usize },

    #[error("distribution size {0} outside [2, 32]")]
    DistributionSize(usize),

    #[error("pipeline stage {stage} failed: {message}")]
    Stage { stage: &'static str, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: bad magic number {found:#010x}, expected {expected:#010x}")]
    BadMagic { path: PathBuf, found: u32, expected: u32 },

    #[error("{path}: truncated file ({context})")]
    Truncated { path: PathBuf, context: String },

    #[error("image count {images} does not match label count {labels}")]
    CountMismatch { images: usize, labels: usize },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
