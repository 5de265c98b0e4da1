//! Qubit-register Fourier transform routed through a qumode: load the
//! register into position, rotate by a quarter period, read it back.

use cvdv_core::linalg::{c, CMatrix, C64};
use cvdv_core::{Circuit, GateKind, Result, SystemLayout, Wire};

use super::transfer::{push_cv_to_dv, push_dv_to_cv};

/// Register slots from least to most significant: `append` padding qubits,
/// the `data` qubits, then the ancillas.
#[derive(Clone, Debug, PartialEq)]
pub struct QftLayout {
    pub data: Vec<usize>,
    pub ancilla: Vec<usize>,
    pub append: Vec<usize>,
}

impl QftLayout {
    pub fn new(n: usize, ancilla: usize, append: usize) -> Self {
        QftLayout {
            append: (0..append).collect(),
            data: (append..append + n).collect(),
            ancilla: (append + n..append + n + ancilla).collect(),
        }
    }

    pub fn total(&self) -> usize {
        self.data.len() + self.ancilla.len() + self.append.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QftParams {
    pub n: usize,
    pub ancilla: usize,
    pub append: usize,
    pub cutoff: usize,
    /// Transfer cell spacing.
    pub spacing: f64,
    /// Displacements before and after the quarter rotation.
    pub pre_shift: f64,
    pub post_shift: f64,
}

/// Ancilla H layer, DV -> CV, `D(pre) F D(post)`, CV -> DV.
pub fn build_qft(p: &QftParams) -> Result<(Circuit, QftLayout)> {
    let slots = QftLayout::new(p.n, p.ancilla, p.append);
    let layout = SystemLayout::new(slots.total(), vec![p.cutoff])?;
    let mut circ = Circuit::new("qft", layout)
        .param("n", p.n as f64)
        .param("ancilla", p.ancilla as f64)
        .param("append", p.append as f64)
        .param("cutoff", p.cutoff as f64)
        .param("spacing", p.spacing)
        .param("pre_shift", p.pre_shift)
        .param("post_shift", p.post_shift);
    let all: Vec<usize> = (0..slots.total()).collect();
    let m = [Wire::Mode(0)];
    for &a in &slots.ancilla {
        circ.push(GateKind::H, &[Wire::Qubit(a)])?;
    }
    push_dv_to_cv(&mut circ, &all, 0, p.spacing)?;
    circ.push(GateKind::Displacement(c(p.pre_shift, 0.0)), &m)?;
    circ.push(GateKind::Fourier, &m)?;
    circ.push(GateKind::Displacement(c(p.post_shift, 0.0)), &m)?;
    push_cv_to_dv(&mut circ, &all, 0, p.spacing)?;
    Ok((circ, slots))
}

/// Exact `n`-qubit DFT applied to basis state `k`, as a state vector indexed
/// like `register_marginal` (first listed qubit most significant).
pub fn dft_column(n: usize, k: usize) -> Vec<C64> {
    let d = 1usize << n;
    let norm = (d as f64).sqrt().recip();
    (0..d)
        .map(|j| C64::from_polar(norm, 2.0 * std::f64::consts::PI * (j * k) as f64 / d as f64))
        .collect()
}

/// `<v|ρ|v>` with `v` indexed like [`dft_column`] and `rho` the reduced
/// state of `qubits` in the core's little-endian order.
pub fn register_overlap(rho: &CMatrix, qubits: &[usize], v: &[C64]) -> f64 {
    // Map the register index (qubits[0] most significant) onto the local
    // little-endian index of the reduced state, whose wire i is qubits
    // sorted ascending.
    let mut sorted = qubits.to_vec();
    sorted.sort_unstable();
    let n = qubits.len();
    let local = |r: usize| {
        let mut l = 0;
        for (pos, q) in qubits.iter().enumerate() {
            let bit = (r >> (n - 1 - pos)) & 1;
            let wire = sorted.iter().position(|s| s == q).unwrap();
            l |= bit << wire;
        }
        l
    };
    let mut acc = C64::new(0.0, 0.0);
    for (a, va) in v.iter().enumerate() {
        for (b, vb) in v.iter().enumerate() {
            acc += va.conj() * rho[(local(a), local(b))] * vb;
        }
    }
    acc.re
}
