use thiserror::Error;

/// Errors raised by the oracle, simulator, program and analysis layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("length mismatch: expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid word width {0}")]
    InvalidWidth(usize),

    #[error("value {value} does not fit in {width} bits")]
    ValueOutOfRange { value: u64, width: usize },

    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NonUnitary { deviation: f64 },

    #[error("matrix is not monomial; the basis-tracking backend cannot apply it")]
    NotMonomial,

    #[error("matrix dimension {found} does not match 2^{targets} for the target list")]
    DimensionMismatch { targets: usize, found: usize },

    #[error("qubit position {position} outside 1..={total}")]
    TargetOutOfRange { position: usize, total: usize },

    #[error("duplicate qubit position {0}")]
    DuplicateTarget(usize),

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("{unit} {required} requested, cap is {cap}")]
    CapExceeded { required: usize, cap: usize, unit: &'static str },

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("adversary trace did not succeed")]
    TraceNotSucceeded,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
