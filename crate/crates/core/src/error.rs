use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` expects {expected} arguments, got {got}")]
    ArityMismatch { symbol: String, expected: usize, got: usize },
    #[error("variable `{0}` collides with a constant symbol")]
    VariableCollision(String),
    #[error("no binding for variable `{0}`")]
    MissingVariable(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("malformed algebra: {0}")]
    MalformedAlgebra(String),
    #[error("closure exceeded budget of {0} elements")]
    BudgetExceeded(usize),
    #[error("enumeration exceeded limit of {0}")]
    LimitExceeded(usize),
    #[error("partition is not compatible with the operations")]
    IncompatiblePartition,
    #[error("carrier mismatch: {0} vs {1}")]
    CarrierMismatch(usize, usize),
    #[error("generator images do not generate the target")]
    NotGenerated,
    #[error("target is not in the variety: {0}")]
    NotInVariety(String),
    #[error("congruence is not central")]
    NotCentral,
    #[error("linear decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("map is not a section of the projection")]
    NotASection,
    #[error("element {0} is not idempotent")]
    NotIdempotent(usize),
    #[error("no idempotent element")]
    NoIdempotent,
    #[error("no splitting homomorphism found")]
    SplittingNotFound,
    #[error("map is not surjective")]
    NotSurjective,
    #[error("result failed an internal compatibility check: {0}")]
    IncompatibleResult(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("{0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
