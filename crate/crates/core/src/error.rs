//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MlaError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-positive physical parameter: {0}")]
    NonPositivePhysical(String),
    #[error("unknown material `{0}`")]
    UnknownMaterial(String),
    #[error("unknown {kind} `{name}`")]
    UnknownStrategy { kind: &'static str, name: String },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported derivative order {0} (at most 4)")]
    UnsupportedDerivative(usize),
    #[error("non-finite field value at step {step} (t = {t})")]
    NonFiniteField { step: usize, t: f64 },
    #[error("singular interface matrix (pivot {pivot:e} at row {row})")]
    SingularInterfaceMatrix { row: usize, pivot: f64 },
    #[error("interface stage II invoked before stage I")]
    StageOrderViolation,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("grids are not nested: {0}")]
    GridsNotNested(String),
    #[error("pairing mismatch: {0}")]
    PairingMismatch(String),
    #[error("curl is undefined for 1D grids")]
    CurlUndefined1D,
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl MlaError {
    /// Process exit code for the CLI: 2 config, 3 io, 4 instability, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            MlaError::Io(_) => 3,
            MlaError::NonFiniteField { .. } => 4,
            MlaError::SingularInterfaceMatrix { .. }
            | MlaError::StageOrderViolation
            | MlaError::DegenerateInput(_)
            | MlaError::GridsNotNested(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, MlaError>;
