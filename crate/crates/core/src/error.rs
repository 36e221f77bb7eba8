use thiserror::Error;

/// Problems found while reading a symbol from text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty symbol")]
    Empty,
    #[error("block {block} is empty")]
    EmptyBlock { block: usize },
    #[error("invalid label token {token:?}")]
    InvalidToken { token: String },
    #[error("duplicate label {label}")]
    DuplicateLabel { label: usize },
    #[error("label {label} is out of range for {n} labels (label {missing} is missing)")]
    MissingLabel {
        label: usize,
        n: usize,
        missing: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("symbol {symbol} is not a cell of cell({n},{w})")]
    NotACell { symbol: String, n: usize, w: usize },

    #[error("dimension {dim} out of range 1..={max}")]
    DimensionOutOfRange { dim: usize, max: usize },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("unsupported product: {0}")]
    UnsupportedProduct(String),

    /// A canonical form that must exist did not. Indicates a wheel-order misconfiguration.
    #[error("canonicalization failed: {0}")]
    Canonicalization(String),

    #[error("certification failed: {0}")]
    Certification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
