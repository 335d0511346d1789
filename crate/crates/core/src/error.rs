use std::path::PathBuf;

use crate::label::Label;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("qubit index {0} used more than once in one gate")]
    DuplicateQubit(usize),
    #[error("{0} qubits requested, at most {max} supported", max = crate::qsim::MAX_QUBITS)]
    TooManyQubits(usize),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("feature vector has zero norm")]
    ZeroNorm,
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("invalid keep list: {0}")]
    InvalidKeep(String),
    #[error("fidelity {0} lies outside [0, 1] beyond tolerance")]
    FidelityOutOfRange(f64),
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("invalid counts: {0}")]
    InvalidCounts(String),

    #[error("invalid circuit layout: {0}")]
    InvalidLayout(String),
    #[error("parameter vector has length {actual}, layout requires {expected}")]
    ParamLength { expected: usize, actual: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("empty batch")]
    EmptyBatch,
    #[error("gradient mode {gradient} cannot be used with fidelity mode {fidelity}")]
    ModeMismatch { gradient: String, fidelity: String },
    #[error("fraud sample '{0}' found in the training set")]
    FraudInTraining(String),

    #[error("sample '{0}' has no label")]
    Unlabeled(String),
    #[error("empty record set")]
    EmptyRecords,
    #[error("no {0} records present")]
    MissingClass(Label),
    #[error("threshold {0} outside [0, 1]")]
    InvalidThreshold(f64),
    #[error("fraud pool has {available} records, {needed} needed")]
    InsufficientFraudPool { needed: usize, available: usize },

    #[error("noise probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("missing column '{0}'")]
    MissingColumn(String),
    #[error("table has no usable rows")]
    EmptyTable,
    #[error("empty column")]
    EmptyColumn,
    #[error("cannot select {k} features from {available}")]
    TooManyFeatures { k: usize, available: usize },
    #[error("infeasible split: {0}")]
    InfeasibleSplit(String),
    #[error("no jobs")]
    NoJobs,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
