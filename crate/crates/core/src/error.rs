use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid waveform parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported filter: {0}")]
    UnsupportedFilter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("expected {expected} bits, got {actual}")]
    BitCount { expected: usize, actual: usize },
    #[error("empty channel impulse response")]
    EmptyImpulseResponse,
    #[error("negative noise variance {0}")]
    NegativeNoiseVariance(f64),
    #[error("equivalent matrix has no entries above the sparsity threshold")]
    EmptyGraph,
    #[error("iteration count must be at least 1")]
    ZeroIterations,
    #[error("search space of {0} candidates exceeds the enumeration limit")]
    SearchSpaceTooLarge(u128),
    #[error("complexity count overflows 128-bit integers")]
    ComplexityOverflow,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
