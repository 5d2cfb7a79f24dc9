use thiserror::Error;

/// Errors raised by ring, matrix, identity and search operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("subset mask bit {bit} out of range for family of size {m}")]
    MaskOutOfRange { bit: u32, m: usize },

    #[error("algorithm {algorithm} is not supported over {ring}")]
    UnsupportedAlgorithm { algorithm: String, ring: String },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("too many matrices: {got} (limit {limit})")]
    TooManyMatrices { got: usize, limit: usize },

    #[error("too many elements: {got} (limit {limit})")]
    TooManyElements { got: usize, limit: usize },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("unsupported ring {0}")]
    UnsupportedRing(String),

    #[error("component fields differ: {0}")]
    MixedComponentFields(String),

    #[error("search space too large: {0}")]
    SearchSpaceTooLarge(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid ring descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("malformed JSON at line {line}, column {column}: {message}")]
    MalformedJson {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema violation: {0}")]
    Schema(String),

    /// A guaranteed identity or bound failed on a concrete input.
    #[error("contract violation: {0}")]
    ContractViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
