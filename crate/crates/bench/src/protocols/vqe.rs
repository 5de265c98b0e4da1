//! Knapsack as a QUBO over one qubit and two qumodes, solved with a layered
//! U3 + ECD ansatz.
//!
//! Bit string layout: the qubit bit first, then the photon number of mode 0
//! in binary (most significant first), then mode 1. The first `items` bits
//! select items, the rest encode the slack.

use cvdv_core::engine::{op_matrix, run_pure};
use cvdv_core::linalg::c;
use cvdv_core::{vacuum_state, Circuit, GateKind, PureState, Result, SystemLayout, Wire};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Knapsack {
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
    pub capacity: f64,
}

impl Knapsack {
    pub fn value(&self, x: &[u8]) -> f64 {
        self.values.iter().zip(x).map(|(v, &b)| v * b as f64).sum()
    }

    pub fn weight(&self, x: &[u8]) -> f64 {
        self.weights.iter().zip(x).map(|(w, &b)| w * b as f64).sum()
    }

    /// Default penalty: one more than the total value, so any infeasible
    /// string costs more than the empty selection.
    pub fn default_penalty(&self) -> f64 {
        self.values.iter().sum::<f64>() + 1.0
    }

    /// `-Σ v x + λ (Σ w x + s - W)²` with integer slack `s`.
    pub fn qubo(&self, items: &[u8], slack: usize, penalty: f64) -> f64 {
        let gap = self.weight(items) + slack as f64 - self.capacity;
        -self.value(items) + penalty * gap * gap
    }

    /// Best feasible selection by enumeration.
    pub fn brute_force(&self) -> (Vec<u8>, f64, f64) {
        let n = self.values.len();
        let mut best = (vec![0; n], 0.0, 0.0);
        for mask in 0..1usize << n {
            let x: Vec<u8> = (0..n).map(|i| ((mask >> (n - 1 - i)) & 1) as u8).collect();
            let (v, w) = (self.value(&x), self.weight(&x));
            if w <= self.capacity && v > best.1 {
                best = (x, v, w);
            }
        }
        best
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VqeLayout {
    pub cutoffs: [usize; 2],
}

impl VqeLayout {
    fn bits(n: usize) -> usize {
        n.trailing_zeros() as usize
    }

    pub fn total_bits(&self) -> usize {
        1 + Self::bits(self.cutoffs[0]) + Self::bits(self.cutoffs[1])
    }

    /// Bit string for qubit value `q` and photon numbers `n0`, `n1`.
    pub fn decode(&self, q: usize, n0: usize, n1: usize) -> Vec<u8> {
        let mut out = vec![q as u8];
        for (n, cut) in [(n0, self.cutoffs[0]), (n1, self.cutoffs[1])] {
            let b = Self::bits(cut);
            out.extend((0..b).rev().map(|i| ((n >> i) & 1) as u8));
        }
        out
    }
}

/// Parameters per layer: U3 (θ, φ), Re/Im of β₁, U3 (θ, φ), Re/Im of β₂.
pub const PARAMS_PER_LAYER: usize = 8;

/// Gate `slot` (0..4) of a layer from its two parameters.
fn layer_gate(slot: usize, a: f64, b: f64) -> (GateKind, Vec<Wire>) {
    let q = Wire::Qubit(0);
    match slot {
        0 | 2 => (GateKind::U3(a, b, 0.0), vec![q]),
        1 => (GateKind::Ecd(c(a, b)), vec![q, Wire::Mode(0)]),
        _ => (GateKind::Ecd(c(a, b)), vec![q, Wire::Mode(1)]),
    }
}

pub fn build_ansatz(depth: usize, cutoffs: [usize; 2], params: &[f64]) -> Result<Circuit> {
    let layout = SystemLayout::new(1, cutoffs.to_vec())?;
    let mut circ = Circuit::new("vqe", layout).param("depth", depth as f64);
    for l in 0..depth {
        for slot in 0..4 {
            let i = l * PARAMS_PER_LAYER + 2 * slot;
            let (g, w) = layer_gate(slot, params[i], params[i + 1]);
            circ.push(g, &w)?;
        }
    }
    Ok(circ)
}

/// Exact distribution over `(qubit, n0, n1)`.
pub fn joint_distribution(state: &PureState) -> Vec<((usize, usize, usize), f64)> {
    let c = &state.layout.cutoffs;
    state
        .amps
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let q = i & 1;
            let n0 = (i >> 1) % c[0];
            let n1 = (i >> 1) / c[0];
            ((q, n0, n1), a.norm_sqr())
        })
        .collect()
}

/// QUBO cost of every basis outcome.
pub fn outcome_cost(k: &Knapsack, lay: &VqeLayout, q: usize, n0: usize, n1: usize, penalty: f64) -> f64 {
    let bits = lay.decode(q, n0, n1);
    let items = k.values.len();
    let slack = bits[items..].iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
    k.qubo(&bits[..items], slack, penalty)
}

/// QUBO cost of every amplitude index of the ansatz register.
fn cost_diagonal(k: &Knapsack, cutoffs: [usize; 2], penalty: f64) -> Vec<f64> {
    let lay = VqeLayout { cutoffs };
    (0..2 * cutoffs[0] * cutoffs[1])
        .map(|i| outcome_cost(k, &lay, i & 1, (i >> 1) % cutoffs[0], (i >> 1) / cutoffs[0], penalty))
        .collect()
}

/// QUBO expectation and its gradient from one forward and one adjoint
/// sweep. Gate derivatives are central differences of the local matrices.
pub fn expectation_with_gradient(
    k: &Knapsack,
    depth: usize,
    cutoffs: [usize; 2],
    params: &[f64],
    penalty: f64,
) -> Result<(f64, Vec<f64>)> {
    let circ = build_ansatz(depth, cutoffs, params)?;
    let cost = cost_diagonal(k, cutoffs, penalty);
    let mut states = vec![vacuum_state(&circ.layout)?];
    let mut locals = Vec::with_capacity(circ.ops.len());
    for op in &circ.ops {
        let (m, flat) = op_matrix(&circ.layout, op)?;
        let mut next = states.last().expect("non-empty").clone();
        next.apply_local(&m, &flat)?;
        states.push(next);
        locals.push((m, flat));
    }
    let out = states.last().expect("non-empty");
    let value = out.amps.iter().zip(&cost).map(|(a, w)| a.norm_sqr() * w).sum();
    let mut lam = out.clone();
    lam.amps.iter_mut().zip(&cost).for_each(|(a, w)| *a *= w);
    let mut grad = vec![0.0; params.len()];
    let h = 1e-6;
    for (g, (m, flat)) in locals.iter().enumerate().rev() {
        let (layer, slot) = (g / 4, g % 4);
        let base = layer * PARAMS_PER_LAYER + 2 * slot;
        let dims: Vec<usize> = flat.iter().map(|&w| circ.layout.wire_dim(w)).collect();
        for j in 0..2 {
            let mut up = [params[base], params[base + 1]];
            let mut down = up;
            up[j] += h;
            down[j] -= h;
            let mu = layer_gate(slot, up[0], up[1]).0.matrix(&dims)?;
            let md = layer_gate(slot, down[0], down[1]).0.matrix(&dims)?;
            let dm = (mu - md) / c(2.0 * h, 0.0);
            let mut t = states[g].clone();
            t.apply_local(&dm, flat)?;
            grad[base + j] = 2.0 * lam.inner(&t)?.re;
        }
        lam.apply_local(&m.adjoint(), flat)?;
    }
    Ok((value, grad))
}

/// QUBO expectation of the ansatz output.
pub fn expectation(k: &Knapsack, depth: usize, cutoffs: [usize; 2], params: &[f64], penalty: f64) -> Result<f64> {
    let circ = build_ansatz(depth, cutoffs, params)?;
    let out = run_pure(&circ, &vacuum_state(&circ.layout)?, None)?;
    let lay = VqeLayout { cutoffs };
    Ok(joint_distribution(&out)
        .into_iter()
        .map(|((q, n0, n1), p)| p * outcome_cost(k, &lay, q, n0, n1, penalty))
        .sum())
}
