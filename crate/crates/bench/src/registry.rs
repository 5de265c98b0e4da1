//! Benchmark trait and the ordered registry.

use cvdv_core::{Circuit, PureState};
use serde_json::Value;

use crate::benchmarks::{Cat, Gkp, Jch, Qaoa, Qft, Shor, StateTransfer, Vqe};
use crate::config::Config;
use crate::error::{BenchError, Result};

/// What a benchmark run produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    /// Circuit whose state trajectory feeds the metrics.
    pub circuit: Circuit,
    pub initial: PureState,
    /// Circuit counted for the structural features when it differs from
    /// `circuit` (e.g. one Trotter step).
    pub structure: Option<Circuit>,
    /// Fidelity against the ideal target, where one exists.
    pub fidelity: Option<f64>,
    pub task: Value,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn new(circuit: Circuit, initial: PureState) -> Self {
        Outcome { circuit, initial, structure: None, fidelity: None, task: Value::Null, notes: Vec::new() }
    }
}

/// One density-matrix comparison row.
#[derive(Clone, Debug)]
pub enum NoisyPlan {
    Run {
        label: String,
        circuit: Circuit,
        initial: PureState,
        /// Compare only these wires (reduced states); `None` compares the
        /// whole register.
        keep: Option<Vec<usize>>,
    },
    /// Too large for a density-matrix run on one machine.
    NotDeskScale { label: String, reason: String },
    /// No meaningful noisy comparison exists.
    Skipped { label: String, reason: String },
}

pub trait Benchmark: Send + Sync {
    fn name(&self) -> &'static str;
    /// Row label in the feature table.
    fn title(&self) -> &'static str;
    /// The benchmark's config section.
    fn params(&self, cfg: &Config) -> Value;
    fn execute(&self, cfg: &Config) -> Result<Outcome>;
    fn noisy(&self, cfg: &Config, outcome: &Outcome) -> Result<Vec<NoisyPlan>>;
    /// Note attached when the circuit depth follows a different layering
    /// convention than the published count.
    fn depth_note(&self) -> Option<&'static str> {
        None
    }
}

pub const NAMES: &[&str] = &["state_transfer", "cat", "gkp", "qft", "vqe", "qaoa", "jch", "shor"];

pub fn registry() -> Vec<Box<dyn Benchmark>> {
    vec![
        Box::new(StateTransfer),
        Box::new(Cat),
        Box::new(Gkp),
        Box::new(Qft),
        Box::new(Vqe),
        Box::new(Qaoa),
        Box::new(Jch),
        Box::new(Shor),
    ]
}

pub fn find(name: &str) -> Result<Box<dyn Benchmark>> {
    registry()
        .into_iter()
        .find(|b| b.name() == name)
        .ok_or_else(|| BenchError::Config(format!("unknown benchmark '{name}' (known: {})", NAMES.join(", "))))
}

pub(crate) fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}
