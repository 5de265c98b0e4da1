//! Simulator for circuits over qubits and truncated bosonic modes.
//!
//! See [`hilbert`] for the register ordering convention every other module
//! relies on.

pub mod engine;
pub mod error;
pub mod gates;
pub mod hilbert;
pub mod linalg;
pub mod metrics;
pub mod noise;
pub mod oracle;
pub mod special;

pub use engine::{circuit_features, run_density, run_pure, Circuit, GateOp, StructuralFeatures};
pub use error::{Error, Result};
pub use gates::{GateClass, GateKind};
pub use hilbert::{fock_state, vacuum_state, MixedState, PureState, SystemLayout, Wire};
pub use noise::NoiseModel;
