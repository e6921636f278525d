use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable set mismatch: {0}")]
    SpecMismatch(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("exponent arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("empty reliable window: {0}")]
    WindowCollapse(String),
    #[error("nonzero residue in first-kind integrand {0}")]
    NonzeroResidue(String),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("missing symbol `{0}`")]
    MissingSymbol(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("provenance mismatch: {0}")]
    Provenance(String),
    #[error("inconsistent constraint system at grade {grade}: {witness}")]
    Inconsistent { grade: u32, witness: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
