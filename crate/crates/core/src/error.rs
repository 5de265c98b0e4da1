use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("hilbert: dimension {dim} exceeds the {what} cap of {cap}")]
    DimensionCap { dim: usize, cap: usize, what: &'static str },
    #[error("hilbert: dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("hilbert: invalid wire {0}")]
    InvalidWire(String),
    #[error("hilbert: layouts differ")]
    LayoutMismatch,
    #[error("{module}: invalid parameter: {msg}")]
    InvalidParameter { module: &'static str, msg: String },
    #[error("noise: Kraus completeness deficit {deficit:.3e} exceeds {tol:.1e}")]
    KrausIncomplete { deficit: f64, tol: f64 },
    #[error("engine: {0}")]
    Engine(String),
    #[error("metrics: {0}")]
    Metrics(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(module: &'static str, msg: impl Into<String>) -> Error {
    Error::InvalidParameter { module, msg: msg.into() }
}
