//! Qubit-register <-> qumode position transfer built from conditional
//! quadrature kicks.
//!
//! CV -> DV on `n` qubits (protocol qubit `j` counts from 1):
//! `V_j = exp(i π/(Δ 2^j) σy ⊗ x)` reads bit `j - 1` of the position cell
//! index into the X basis and `W_j = exp(±i Δ 2^{j-2} σx ⊗ p)` folds the
//! position back by half a bit scale (negative sign at `j = n`). A layer of
//! H, X on every protocol qubit but the last (the offset cell index is the
//! two's-complement cell number with its top bit flipped) and a
//! bit-reversing SWAP network then leave the cell index in the register,
//! most significant bit on the highest listed qubit.

use cvdv_core::gates::{momentum, pauli_x, pauli_y, position, MatrixData, WireKind};
use cvdv_core::linalg::{expm_hermitian, kron, CMatrix};
use cvdv_core::{Circuit, GateKind, Result, Wire};

/// `exp(i c σ ⊗ q)` as a custom hybrid gate on `(qubit, mode)`.
fn coupled_kick(name: String, c: f64, sigma: &CMatrix, quad: &CMatrix) -> GateKind {
    let h = kron(sigma, quad);
    GateKind::Custom {
        name,
        wires: vec![WireKind::Qubit, WireKind::Mode],
        matrix: MatrixData::from_matrix(&expm_hermitian(&h, -c)),
        // Same displacement scale as a CD gate: `x = √2 Re α`.
        strength: c * std::f64::consts::FRAC_1_SQRT_2,
    }
}

pub fn v_gate(j: usize, delta: f64, cutoff: usize) -> GateKind {
    let c = std::f64::consts::PI / (delta * 2f64.powi(j as i32));
    coupled_kick(format!("V{j}"), c, &pauli_y(), &position(cutoff))
}

pub fn w_gate(j: usize, n: usize, delta: f64, cutoff: usize) -> GateKind {
    let sign = if j == n { -1.0 } else { 1.0 };
    let c = sign * delta * 2f64.powi(j as i32 - 2);
    coupled_kick(format!("W{j}"), c, &pauli_x(), &momentum(cutoff))
}

/// Append the CV -> DV transfer of `mode` into `qubits`. Protocol qubit `j`
/// is `qubits[n - j]`; after the bit reversal `qubits[i]` holds bit `i` of
/// the cell index.
pub fn push_cv_to_dv(c: &mut Circuit, qubits: &[usize], mode: usize, delta: f64) -> Result<()> {
    let n = qubits.len();
    let cutoff = c.layout.cutoffs[mode];
    let m = Wire::Mode(mode);
    for j in 1..=n {
        let q = qubits[n - j];
        c.push(v_gate(j, delta, cutoff), &[Wire::Qubit(q), m])?;
        c.push(w_gate(j, n, delta, cutoff), &[Wire::Qubit(q), m])?;
    }
    push_decode(c, qubits)
}

/// Basis change and bit reversal that turn the kicked register into the
/// binary cell index.
fn push_decode(c: &mut Circuit, qubits: &[usize]) -> Result<()> {
    let n = qubits.len();
    for &q in qubits {
        c.push(GateKind::H, &[Wire::Qubit(q)])?;
    }
    for &q in &qubits[1..] {
        c.push(GateKind::X, &[Wire::Qubit(q)])?;
    }
    for i in 0..n / 2 {
        c.push(GateKind::Swap, &[Wire::Qubit(qubits[i]), Wire::Qubit(qubits[n - 1 - i])])?;
    }
    Ok(())
}

/// Append the DV -> CV transfer: the exact inverse of [`push_cv_to_dv`].
pub fn push_dv_to_cv(c: &mut Circuit, qubits: &[usize], mode: usize, delta: f64) -> Result<()> {
    let mut fwd = Circuit::new("cv_to_dv", c.layout.clone());
    push_cv_to_dv(&mut fwd, qubits, mode, delta)?;
    c.extend(&fwd.inverse())
}

/// Centre of position cell `k` for an `n`-bit register with spacing `delta`.
pub fn cell_center(k: usize, n: usize, delta: f64) -> f64 {
    (k as f64 - (1usize << (n - 1)) as f64 + 0.5) * delta
}
