//! The eight benchmarks behind the [`Benchmark`](crate::registry::Benchmark)
//! trait.

mod applications;
mod algorithms;
mod primitives;

pub use algorithms::{knapsack, optimize_qaoa, qaoa_params, qaoa_scores, qft_params, qft_run, Qaoa, Qft, Vqe};
pub use applications::{jch_params, jch_traces, shor_params, shor_trials, Jch, Shor};
pub use primitives::{cat_scores, composed_round_trip, gkp_fidelity, reset_round_trip, Cat, Gkp, StateTransfer};

use cvdv_core::linalg::C64;
use cvdv_core::{MixedState, Result};

/// `<v|ρ|v>` for a single-wire state.
pub(crate) fn expect_vector(rho: &MixedState, v: &[C64]) -> f64 {
    let m = rho.matrix();
    let mut acc = C64::new(0.0, 0.0);
    for (i, a) in v.iter().enumerate() {
        for (j, b) in v.iter().enumerate() {
            acc += a.conj() * m[(i, j)] * b;
        }
    }
    acc.re
}

/// Basis state with `value` spread over the listed qubits (`qubits[i]`
/// holds bit `i`), every mode in vacuum.
pub(crate) fn register_basis(layout: &cvdv_core::SystemLayout, qubits: &[usize], value: usize) -> Result<cvdv_core::PureState> {
    let mut s = cvdv_core::vacuum_state(layout)?;
    let idx: usize = qubits.iter().enumerate().map(|(i, &q)| ((value >> i) & 1) << q).sum();
    s.amps.iter_mut().for_each(|a| *a = C64::new(0.0, 0.0));
    s.amps[idx] = C64::new(1.0, 0.0);
    Ok(s)
}
