//! Circuit IR, pure and density-matrix executors, measurement, quadrature
//! read-out and structural features.

use std::collections::BTreeMap;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gates::{GateClass, GateKind, WireKind};
use crate::hilbert::{Embedding, MixedState, PureState, SystemLayout, Wire};
use crate::linalg::{CMatrix, C64, ZERO};
use crate::noise::NoiseModel;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    pub targets: Vec<Wire>,
    /// Seconds; zero means "use the noise model's duration rule".
    #[serde(default)]
    pub duration: f64,
    #[serde(default)]
    pub label: String,
}

impl GateOp {
    pub fn class(&self) -> GateClass {
        self.kind.class()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub name: String,
    pub layout: SystemLayout,
    pub ops: Vec<GateOp>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl Circuit {
    pub fn new(name: impl Into<String>, layout: SystemLayout) -> Self {
        Circuit { name: name.into(), layout, ops: Vec::new(), params: BTreeMap::new() }
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    /// Append a gate after checking its targets against the layout.
    pub fn push(&mut self, kind: GateKind, targets: &[Wire]) -> Result<&mut Self> {
        self.push_labeled(kind, targets, "")
    }

    pub fn push_labeled(&mut self, kind: GateKind, targets: &[Wire], label: &str) -> Result<&mut Self> {
        let op = GateOp { kind, targets: targets.to_vec(), duration: 0.0, label: label.to_string() };
        validate_op(&self.layout, &op)?;
        self.ops.push(op);
        Ok(self)
    }

    /// Append all ops of `other` (same layout).
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.layout != self.layout {
            return Err(Error::LayoutMismatch);
        }
        self.ops.extend(other.ops.iter().cloned());
        Ok(())
    }

    /// Circuit implementing the inverse unitary.
    pub fn inverse(&self) -> Circuit {
        let mut inv = Circuit::new(format!("{}^-1", self.name), self.layout.clone());
        inv.ops = self
            .ops
            .iter()
            .rev()
            .map(|op| GateOp { kind: op.kind.inverse(), ..op.clone() })
            .collect();
        inv
    }

    pub fn validate(&self) -> Result<()> {
        self.ops.iter().try_for_each(|op| validate_op(&self.layout, op))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }

    pub fn from_json(s: &str) -> Result<Circuit> {
        let c: Circuit = serde_json::from_str(s).map_err(|e| Error::Engine(format!("circuit parse: {e}")))?;
        c.validate()?;
        Ok(c)
    }
}

fn validate_op(layout: &SystemLayout, op: &GateOp) -> Result<()> {
    let kinds = op.kind.wire_kinds();
    if kinds.len() != op.targets.len() {
        return Err(invalid("engine", format!("{} takes {} wires, got {}", op.kind.name(), kinds.len(), op.targets.len())));
    }
    for (k, w) in kinds.iter().zip(&op.targets) {
        layout.index(*w)?;
        let ok = matches!((k, w), (WireKind::Qubit, Wire::Qubit(_)) | (WireKind::Mode, Wire::Mode(_)));
        if !ok {
            return Err(invalid("engine", format!("{} cannot act on {w:?}", op.kind.name())));
        }
    }
    let flat: Vec<usize> = op.targets.iter().map(|w| layout.index(*w).unwrap()).collect();
    if (1..flat.len()).any(|i| flat[..i].contains(&flat[i])) {
        return Err(invalid("engine", format!("{} has repeated targets", op.kind.name())));
    }
    if let GateKind::Custom { matrix, .. } = &op.kind {
        let d: usize = flat.iter().map(|&w| layout.wire_dim(w)).product();
        if matrix.dim != d {
            return Err(Error::DimensionMismatch { expected: d, got: matrix.dim });
        }
    }
    Ok(())
}

/// Local matrix of `op` and its flat targets.
pub fn op_matrix(layout: &SystemLayout, op: &GateOp) -> Result<(CMatrix, Vec<usize>)> {
    let flat = op.targets.iter().map(|w| layout.index(*w)).collect::<Result<Vec<_>>>()?;
    let dims: Vec<usize> = flat.iter().map(|&w| layout.wire_dim(w)).collect();
    Ok((op.kind.matrix(&dims)?, flat))
}

pub fn run_pure(
    circuit: &Circuit,
    initial: &PureState,
    mut hook: Option<&mut dyn FnMut(usize, &PureState)>,
) -> Result<PureState> {
    if initial.layout != circuit.layout {
        return Err(Error::LayoutMismatch);
    }
    let dims = circuit.layout.dims();
    let mut state = initial.clone();
    for (i, op) in circuit.ops.iter().enumerate() {
        let (m, flat) = op_matrix(&circuit.layout, op)?;
        Embedding::new(&m, &dims, &flat)?.apply(&mut state.amps);
        if let Some(h) = hook.as_deref_mut() {
            h(i, &state);
        }
    }
    Ok(state)
}

pub fn run_density(
    circuit: &Circuit,
    initial: &MixedState,
    noise: Option<&NoiseModel>,
    mut hook: Option<&mut dyn FnMut(usize, &MixedState)>,
) -> Result<MixedState> {
    if initial.layout != circuit.layout {
        return Err(Error::LayoutMismatch);
    }
    let mut rho = initial.clone();
    for (i, op) in circuit.ops.iter().enumerate() {
        let (m, flat) = op_matrix(&circuit.layout, op)?;
        rho.apply_unitary(&m, &flat)?;
        if let Some(model) = noise {
            let t = if op.duration > 0.0 { op.duration } else { model.gate_duration(op) };
            model.apply_idle(&mut rho, t)?;
        }
        if let Some(h) = hook.as_deref_mut() {
            h(i, &rho);
        }
    }
    Ok(rho)
}

/// Joint distribution of all qubits, indexed by `Σ q_i 2^i`.
pub fn qubit_marginal(state: &PureState) -> Vec<f64> {
    let q = state.layout.qubits;
    let mut p = vec![0.0; 1 << q];
    let mask = (1 << q) - 1;
    for (i, a) in state.amps.iter().enumerate() {
        p[i & mask] += a.norm_sqr();
    }
    p
}

/// Distribution over the listed qubits, indexed with `qubits[0]` as the most
/// significant bit.
pub fn register_marginal(state: &PureState, qubits: &[usize]) -> Vec<f64> {
    let mut p = vec![0.0; 1 << qubits.len()];
    for (i, a) in state.amps.iter().enumerate() {
        let mut v = 0;
        for &q in qubits {
            v = (v << 1) | ((i >> q) & 1);
        }
        p[v] += a.norm_sqr();
    }
    p
}

/// Draw `shots` indices from a discrete distribution.
pub fn sample_indices(probs: &[f64], shots: usize, seed: u64) -> Vec<usize> {
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p.max(0.0);
        cdf.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..shots)
        .map(|_| {
            let u: f64 = rng.random::<f64>() * acc;
            cdf.partition_point(|&c| c <= u).min(probs.len() - 1)
        })
        .collect()
}

/// Bitstring of `value` over `n` qubits, qubit `n-1` first.
pub fn bitstring(value: usize, n: usize) -> String {
    (0..n).rev().map(|i| if (value >> i) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Sampled counts of all qubits keyed by bitstring (qubit `n-1` first).
pub fn measure_qubits(state: &PureState, shots: usize, seed: u64) -> Result<BTreeMap<String, usize>> {
    let q = state.layout.qubits;
    if q == 0 {
        return Err(invalid("engine", "no qubits to measure"));
    }
    let mut counts = BTreeMap::new();
    for i in sample_indices(&qubit_marginal(state), shots, seed) {
        *counts.entry(bitstring(i, q)).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Photon-number distribution of one mode.
pub fn measure_fock(state: &PureState, mode: usize) -> Result<Vec<f64>> {
    let w = state.layout.index(Wire::Mode(mode))?;
    let n = state.layout.wire_dim(w);
    let stride = state.layout.strides()[w];
    let mut p = vec![0.0; n];
    for (i, a) in state.amps.iter().enumerate() {
        p[(i / stride) % n] += a.norm_sqr();
    }
    Ok(p)
}

pub fn mean_photon(state: &PureState, mode: usize) -> Result<f64> {
    Ok(measure_fock(state, mode)?.iter().enumerate().map(|(n, p)| n as f64 * p).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quadrature {
    X,
    P,
}

/// Normalized Hermite functions `φ_0..φ_{n-1}` at `x`.
pub fn hermite_functions(x: f64, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    if n == 0 {
        return out;
    }
    out[0] = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
    if n > 1 {
        out[1] = std::f64::consts::SQRT_2 * x * out[0];
    }
    for k in 1..n.saturating_sub(1) {
        let kf = k as f64;
        out[k + 1] = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
    }
    out
}

/// Default grid: 1001 points over `[-L, L]`, `L = √(2N) + 4`.
pub fn default_quadrature_grid(cutoff: usize) -> Vec<f64> {
    let l = (2.0 * cutoff as f64).sqrt() + 4.0;
    linspace(-l, l, 1001)
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Basis functions for the chosen quadrature; the momentum ones carry `(-i)^n`.
fn quadrature_basis(x: f64, n: usize, basis: Quadrature) -> Vec<C64> {
    let h = hermite_functions(x, n);
    match basis {
        Quadrature::X => h.into_iter().map(|v| C64::new(v, 0.0)).collect(),
        Quadrature::P => h
            .into_iter()
            .enumerate()
            .map(|(k, v)| C64::new(v, 0.0) * C64::new(0.0, -1.0).powu(k as u32))
            .collect(),
    }
}

/// `ψ(x) = Σ c_n φ_n(x)` for a single-mode pure state given by Fock amplitudes.
pub fn quadrature_wavefunction(fock_amps: &[C64], basis: Quadrature, grid: &[f64]) -> Vec<C64> {
    grid.iter()
        .map(|&x| {
            quadrature_basis(x, fock_amps.len(), basis).iter().zip(fock_amps).map(|(b, a)| b * a).sum()
        })
        .collect()
}

/// `P(x) = <x|ρ|x>` for a single-mode density matrix.
pub fn quadrature_distribution(rho_mode: &MixedState, basis: Quadrature, grid: &[f64]) -> Result<Vec<f64>> {
    if rho_mode.layout.qubits != 0 || rho_mode.layout.modes() != 1 {
        return Err(invalid("engine", "quadrature distribution needs a single-mode state"));
    }
    let n = rho_mode.dim();
    let rho = rho_mode.matrix();
    Ok(grid
        .iter()
        .map(|&x| {
            let phi = quadrature_basis(x, n, basis);
            let mut acc = ZERO;
            for r in 0..n {
                let mut row = ZERO;
                for c in 0..n {
                    row += rho[(r, c)] * phi[c].conj();
                }
                acc += phi[r] * row;
            }
            acc.re.max(0.0)
        })
        .collect())
}

pub fn trapezoid(grid: &[f64], values: &[f64]) -> f64 {
    grid.windows(2).zip(values.windows(2)).map(|(g, v)| 0.5 * (g[1] - g[0]) * (v[0] + v[1])).sum()
}

/// Quadrature samples drawn from `P(x)` on the grid.
pub fn measure_quadrature(
    state: &PureState,
    mode: usize,
    basis: Quadrature,
    grid: &[f64],
    shots: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let rho = state.mode_reduced(mode)?;
    let p = quadrature_distribution(&rho, basis, grid)?;
    if (trapezoid(grid, &p) - 1.0).abs() > 0.01 {
        return Err(invalid("engine", "quadrature grid too coarse to normalize within 1%"));
    }
    Ok(sample_indices(&p, shots, seed).into_iter().map(|i| grid[i]).collect())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralFeatures {
    pub qubits: usize,
    pub qumodes: usize,
    pub qubit_gates: usize,
    pub qumode_gates: usize,
    pub hybrid_gates: usize,
    pub depth: usize,
}

/// Gate counts by class and ASAP depth, each op occupying one layer on
/// every wire it touches.
pub fn circuit_features(circuit: &Circuit) -> StructuralFeatures {
    let mut f = StructuralFeatures {
        qubits: circuit.layout.qubits,
        qumodes: circuit.layout.modes(),
        ..Default::default()
    };
    let mut level = vec![0usize; circuit.layout.wire_count()];
    for op in &circuit.ops {
        match op.class() {
            GateClass::Qubit => f.qubit_gates += 1,
            GateClass::Qumode => f.qumode_gates += 1,
            GateClass::Hybrid => f.hybrid_gates += 1,
        }
        let flat: Vec<usize> = op.targets.iter().map(|w| circuit.layout.index(*w).unwrap()).collect();
        let l = flat.iter().map(|&w| level[w]).max().unwrap_or(0) + 1;
        for w in flat {
            level[w] = l;
        }
        f.depth = f.depth.max(l);
    }
    f
}
