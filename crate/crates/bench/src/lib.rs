//! Benchmark circuits for hybrid qubit-qumode hardware, their drivers, and
//! suite reporting.

pub mod benchmarks;
pub mod config;
pub mod error;
pub mod optimize;
pub mod protocols;
pub mod registry;
pub mod report;
pub mod suite;

pub use config::Config;
pub use error::{BenchError, Result};
pub use registry::{find, registry, Benchmark};
