use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid game parameters: {0}")]
    InvalidGame(String),

    #[error("invalid bit string: {0}")]
    InvalidBitString(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid decoder: {0}")]
    InvalidDecoder(String),

    #[error("exhaustive search supports n <= 3, got n = {0}; use local mode instead")]
    SearchTooLarge(usize),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("no ±1 assignment satisfies the product constraints")]
    InconsistentConstraints,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("inconsistent sign pattern: {0}")]
    InconsistentSignPattern(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("parity-oblivious condition violated (max deviation {0:.3e})")]
    PoViolation(f64),

    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),

    #[error("not a ±1 observable: {0}")]
    NotInvolution(String),

    #[error("splitter not normalized: |alpha|^2 + |beta|^2 = {0}")]
    SplitterNormalization(f64),

    #[error("duplicate preparation settings at positions {0} and {1}")]
    DuplicateSettings(usize, usize),

    #[error("no parity-consistent bijection found (best min fidelity {0:.12})")]
    EncodingMismatch(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
