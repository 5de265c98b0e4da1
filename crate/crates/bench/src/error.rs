use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Core(#[from] cvdv_core::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("{benchmark}: {msg}")]
    Task { benchmark: String, msg: String },
    #[error("optimizer: {0}")]
    Optimizer(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl BenchError {
    pub fn task(benchmark: &str, msg: impl Into<String>) -> Self {
        BenchError::Task { benchmark: benchmark.to_string(), msg: msg.into() }
    }

    /// True when the failure is a dimension cap rather than a bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, BenchError::Core(cvdv_core::Error::DimensionCap { .. }))
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;
