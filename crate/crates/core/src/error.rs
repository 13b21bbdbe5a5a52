use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unstable model: AR root with modulus {modulus:.9} is not strictly inside the unit circle")]
    UnstableModel { modulus: f64 },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid scale factor {lambda}: {reason}")]
    InvalidScaleFactor { lambda: f64, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("register of {0} qubits exceeds the dense simulation limit")]
    TooManyQubits(usize),

    #[error("gate root failed: eigendecomposition residual {residual:e}")]
    DefectiveEigendecomposition { residual: f64 },

    #[error("undefined relative error: reference value is zero")]
    UndefinedRelativeError,

    #[error("cumulant requires invertible observable; use predict_expectation route")]
    NonInvertibleObservable,

    #[error("shot sampling requires a projector observable")]
    NotAProjector,

    #[error("not enough data: {0}")]
    NotEnoughData(String),

    #[error("missing filter-function index ({0}, {1})")]
    MissingIndex(usize, usize),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config error{}: {message}", .line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Config { line: Option<usize>, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
