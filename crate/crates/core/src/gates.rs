//! Gate matrices on the truncated space.
//!
//! Bosonic gates exponentiate the truncated generator, so every matrix is
//! exactly unitary at the chosen cutoff.
//!
//! Conventions:
//! - `x = (a + a†)/√2`, `p = i(a† - a)/√2`; `D(α)` shifts `<x>` by `√2 Re α`
//!   and `<p>` by `√2 Im α`.
//! - `R(θ) = exp(iθ n)`, `Fourier = R(π/2)`.
//! - `S(z) = exp((z* a² - z a†²)/2)`; real `z > 0` squeezes `x`.
//! - `BS(θ, φ) = exp(θ(e^{iφ} a b† - e^{-iφ} a† b))`; `Hopping(θ) = exp(-iθ(a† b + a b†))`.
//! - `CD(α) = exp(σz ⊗ (α a† - α* a))`, so `|0>` sees `D(α)` and `|1>` sees `D(-α)`.
//! - `CR(θ) = exp(-i θ/2 σz ⊗ n)`.
//! - `JC(θ) = exp(-iθ(σ+ ⊗ a + σ- ⊗ a†))` with `σ+ = |1><0|` (`|e> = |1>`).
//! - `ECD(β) = (X ⊗ I) CD(β)`.
//! - `U3(θ, φ, λ) = [[cos θ/2, -e^{iλ} sin θ/2], [e^{iφ} sin θ/2, e^{i(φ+λ)} cos θ/2]]`.
//! - `CNOT` targets are `[control, target]`; `SWAP` exchanges two qubits.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{c, diag, expm, identity, kron, CMatrix, C64, I, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WireKind {
    Qubit,
    Mode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateClass {
    Qubit,
    Qumode,
    Hybrid,
}

/// Dense matrix in a serializable row-major form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixData {
    pub dim: usize,
    pub entries: Vec<C64>,
}

impl MatrixData {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let dim = m.nrows();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for col in 0..dim {
                entries.push(m[(r, col)]);
            }
        }
        MatrixData { dim, entries }
    }

    pub fn to_matrix(&self) -> CMatrix {
        CMatrix::from_row_slice(self.dim, self.dim, &self.entries)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params")]
pub enum GateKind {
    Displacement(C64),
    Squeeze(C64),
    Rotation(f64),
    Beamsplitter(f64, f64),
    Hopping(f64),
    ConditionalDisplacement(C64),
    ConditionalDisplacementAsym(C64, C64),
    ConditionalRotation(f64),
    JaynesCummings(f64),
    Ecd(C64),
    Fourier,
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    Rx(f64),
    Ry(f64),
    Rz(f64),
    U3(f64, f64, f64),
    Cnot,
    Swap,
    /// Arbitrary unitary. `strength` stands in for the driving parameter in
    /// duration rules.
    Custom {
        name: String,
        wires: Vec<WireKind>,
        matrix: MatrixData,
        #[serde(default)]
        strength: f64,
    },
}

impl GateKind {
    pub fn name(&self) -> &str {
        use GateKind::*;
        match self {
            Displacement(_) => "D",
            Squeeze(_) => "S",
            Rotation(_) => "R",
            Beamsplitter(..) => "BS",
            Hopping(_) => "Hop",
            ConditionalDisplacement(_) => "CD",
            ConditionalDisplacementAsym(..) => "CDasym",
            ConditionalRotation(_) => "CR",
            JaynesCummings(_) => "JC",
            Ecd(_) => "ECD",
            Fourier => "F",
            X => "X",
            Y => "Y",
            Z => "Z",
            H => "H",
            S => "Sq",
            Sdg => "Sqdg",
            Rx(_) => "Rx",
            Ry(_) => "Ry",
            Rz(_) => "Rz",
            U3(..) => "U3",
            Cnot => "CNOT",
            Swap => "SWAP",
            Custom { name, .. } => name,
        }
    }

    /// Wire kinds the gate expects, in target order.
    pub fn wire_kinds(&self) -> Vec<WireKind> {
        use GateKind::*;
        use WireKind::{Mode as M, Qubit as Q};
        match self {
            Displacement(_) | Squeeze(_) | Rotation(_) | Fourier => vec![M],
            Beamsplitter(..) | Hopping(_) => vec![M, M],
            ConditionalDisplacement(_)
            | ConditionalDisplacementAsym(..)
            | ConditionalRotation(_)
            | JaynesCummings(_)
            | Ecd(_) => vec![Q, M],
            X | Y | Z | H | S | Sdg | Rx(_) | Ry(_) | Rz(_) | U3(..) => vec![Q],
            Cnot | Swap => vec![Q, Q],
            Custom { wires, .. } => wires.clone(),
        }
    }

    pub fn class(&self) -> GateClass {
        let kinds = self.wire_kinds();
        let q = kinds.contains(&WireKind::Qubit);
        let m = kinds.contains(&WireKind::Mode);
        match (q, m) {
            (true, true) => GateClass::Hybrid,
            (false, true) => GateClass::Qumode,
            _ => GateClass::Qubit,
        }
    }

    /// Magnitude of the gate's driving parameter (used by duration rules).
    pub fn parameter_magnitude(&self) -> f64 {
        use GateKind::*;
        match self {
            Displacement(z) | Squeeze(z) | ConditionalDisplacement(z) | Ecd(z) => z.norm(),
            ConditionalDisplacementAsym(a, b) => a.norm().max(b.norm()),
            Rotation(t) | Hopping(t) | ConditionalRotation(t) | JaynesCummings(t) => t.abs(),
            Beamsplitter(t, _) => t.abs(),
            Fourier => FRAC_PI_2,
            Rx(t) | Ry(t) | Rz(t) => t.abs(),
            U3(t, _, _) => t.abs(),
            Custom { strength, .. } => strength.abs(),
            _ => 0.0,
        }
    }

    /// The inverse gate, expressed in the same gate family where one exists.
    pub fn inverse(&self) -> GateKind {
        use GateKind::*;
        match self {
            Displacement(z) => Displacement(-z),
            Squeeze(z) => Squeeze(-z),
            Rotation(t) => Rotation(-t),
            Beamsplitter(t, p) => Beamsplitter(-t, *p),
            Hopping(t) => Hopping(-t),
            ConditionalDisplacement(z) => ConditionalDisplacement(-z),
            ConditionalDisplacementAsym(a, b) => ConditionalDisplacementAsym(-a, -b),
            ConditionalRotation(t) => ConditionalRotation(-t),
            JaynesCummings(t) => JaynesCummings(-t),
            Fourier => Rotation(-FRAC_PI_2),
            S => Sdg,
            Sdg => S,
            Rx(t) => Rx(-t),
            Ry(t) => Ry(-t),
            Rz(t) => Rz(-t),
            U3(t, p, l) => U3(-t, -l, -p),
            // X CD(β) X = CD(-β), so ECD squares to the identity.
            X | Y | Z | H | Cnot | Swap | Ecd(_) => self.clone(),
            Custom { name, wires, matrix, strength } => Custom {
                name: format!("{name}^-1"),
                wires: wires.clone(),
                matrix: MatrixData::from_matrix(&matrix.to_matrix().adjoint()),
                strength: *strength,
            },
        }
    }

    /// Unitary on the target wires (Kronecker order of the targets).
    pub fn matrix(&self, dims: &[usize]) -> Result<CMatrix> {
        use GateKind::*;
        let kinds = self.wire_kinds();
        if kinds.len() != dims.len() {
            return Err(Error::DimensionMismatch { expected: kinds.len(), got: dims.len() });
        }
        for (k, &d) in kinds.iter().zip(dims) {
            if (*k == WireKind::Qubit && d != 2) || d < 2 {
                return Err(invalid("gates", format!("{}: bad wire dimension {d}", self.name())));
            }
        }
        let n = |k: usize| dims[k];
        Ok(match self {
            Displacement(a) => displacement(*a, n(0)),
            Squeeze(z) => squeeze(*z, n(0)),
            Rotation(t) => rotation(*t, n(0)),
            Fourier => rotation(FRAC_PI_2, n(0)),
            Beamsplitter(t, p) => beamsplitter(*t, *p, n(0), n(1)),
            Hopping(t) => hopping(*t, n(0), n(1)),
            ConditionalDisplacement(a) => conditional_displacement(*a, n(1)),
            ConditionalDisplacementAsym(a, b) => conditional_displacement_asym(*a, *b, n(1)),
            ConditionalRotation(t) => conditional_rotation(*t, n(1)),
            JaynesCummings(t) => jaynes_cummings(*t, n(1)),
            Ecd(b) => ecd(*b, n(1)),
            X => pauli_x(),
            Y => pauli_y(),
            Z => pauli_z(),
            H => hadamard(),
            S => diag(&[ONE, I]),
            Sdg => diag(&[ONE, -I]),
            Rx(t) => rx(*t),
            Ry(t) => ry(*t),
            Rz(t) => rz(*t),
            U3(t, p, l) => u3(*t, *p, *l),
            Cnot => cnot(),
            Swap => swap(),
            Custom { matrix, .. } => {
                let expected: usize = dims.iter().product();
                if matrix.dim != expected {
                    return Err(Error::DimensionMismatch { expected, got: matrix.dim });
                }
                matrix.to_matrix()
            }
        })
    }
}

/// Annihilation operator on `N` levels: `a[n-1, n] = √n`.
pub fn ladder(n: usize) -> CMatrix {
    let mut a = CMatrix::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = c((k as f64).sqrt(), 0.0);
    }
    a
}

pub fn number(n: usize) -> CMatrix {
    diag(&(0..n).map(|k| c(k as f64, 0.0)).collect::<Vec<_>>())
}

pub fn position(n: usize) -> CMatrix {
    let a = ladder(n);
    (&a + a.adjoint()) * c(std::f64::consts::FRAC_1_SQRT_2, 0.0)
}

pub fn momentum(n: usize) -> CMatrix {
    let a = ladder(n);
    (a.adjoint() - &a) * c(0.0, std::f64::consts::FRAC_1_SQRT_2)
}

/// `exp(g)` for an anti-Hermitian generator `g`.
fn exp_antihermitian(g: &CMatrix) -> CMatrix {
    debug_assert!(crate::linalg::max_abs_diff(g, &-g.adjoint()) < 1e-12, "generator not anti-Hermitian");
    expm(g)
}

fn displacement_generator(alpha: C64, n: usize) -> CMatrix {
    let a = ladder(n);
    a.adjoint() * alpha - &a * alpha.conj()
}

pub fn displacement(alpha: C64, n: usize) -> CMatrix {
    if alpha == ZERO {
        return identity(n);
    }
    exp_antihermitian(&displacement_generator(alpha, n))
}

pub fn squeeze(z: C64, n: usize) -> CMatrix {
    if z == ZERO {
        return identity(n);
    }
    let a = ladder(n);
    let a2 = &a * &a;
    let ad2 = a2.adjoint();
    exp_antihermitian(&((a2 * z.conj() - ad2 * z) * c(0.5, 0.0)))
}

pub fn rotation(theta: f64, n: usize) -> CMatrix {
    diag(&(0..n).map(|k| C64::from_polar(1.0, theta * k as f64)).collect::<Vec<_>>())
}

fn two_mode_ops(n1: usize, n2: usize) -> (CMatrix, CMatrix) {
    (kron(&ladder(n1), &identity(n2)), kron(&identity(n1), &ladder(n2)))
}

pub fn beamsplitter(theta: f64, phi: f64, n1: usize, n2: usize) -> CMatrix {
    let (a, b) = two_mode_ops(n1, n2);
    let e = C64::from_polar(1.0, phi);
    let g = (&a * b.adjoint() * e - a.adjoint() * &b * e.conj()) * c(theta, 0.0);
    exp_antihermitian(&g)
}

pub fn hopping(theta: f64, n1: usize, n2: usize) -> CMatrix {
    let (a, b) = two_mode_ops(n1, n2);
    let h = a.adjoint() * &b + &a * b.adjoint();
    exp_antihermitian(&(h * c(0.0, -theta)))
}

fn block_diag(top: &CMatrix, bottom: &CMatrix) -> CMatrix {
    let (n, m) = (top.nrows(), bottom.nrows());
    let mut out = CMatrix::zeros(n + m, n + m);
    out.view_mut((0, 0), (n, n)).copy_from(top);
    out.view_mut((n, n), (m, m)).copy_from(bottom);
    out
}

pub fn conditional_displacement(alpha: C64, n: usize) -> CMatrix {
    let d = displacement(alpha, n);
    let dinv = d.adjoint();
    block_diag(&d, &dinv)
}

pub fn conditional_displacement_asym(alpha: C64, beta: C64, n: usize) -> CMatrix {
    block_diag(&displacement(alpha, n), &displacement(beta, n))
}

pub fn conditional_rotation(theta: f64, n: usize) -> CMatrix {
    block_diag(&rotation(-theta / 2.0, n), &rotation(theta / 2.0, n))
}

pub fn jaynes_cummings(theta: f64, n: usize) -> CMatrix {
    // σ+ = |1><0| in the qubit factor.
    let mut sp = CMatrix::zeros(2, 2);
    sp[(1, 0)] = ONE;
    let a = ladder(n);
    let g = kron(&sp, &a) + kron(&sp.adjoint(), &a.adjoint());
    exp_antihermitian(&(g * c(0.0, -theta)))
}

pub fn ecd(beta: C64, n: usize) -> CMatrix {
    kron(&pauli_x(), &identity(n)) * conditional_displacement(beta, n)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMatrix {
    diag(&[ONE, -ONE])
}

pub fn hadamard() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)])
}

pub fn rx(t: f64) -> CMatrix {
    let (co, si) = ((t / 2.0).cos(), (t / 2.0).sin());
    CMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(0.0, -si), c(0.0, -si), c(co, 0.0)])
}

pub fn ry(t: f64) -> CMatrix {
    let (co, si) = ((t / 2.0).cos(), (t / 2.0).sin());
    CMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(-si, 0.0), c(si, 0.0), c(co, 0.0)])
}

pub fn rz(t: f64) -> CMatrix {
    diag(&[C64::from_polar(1.0, -t / 2.0), C64::from_polar(1.0, t / 2.0)])
}

pub fn u3(theta: f64, phi: f64, lambda: f64) -> CMatrix {
    let (co, si) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    CMatrix::from_row_slice(
        2,
        2,
        &[
            c(co, 0.0),
            -C64::from_polar(si, lambda),
            C64::from_polar(si, phi),
            C64::from_polar(co, phi + lambda),
        ],
    )
}

pub fn cnot() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    m
}

pub fn swap() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = ONE;
    m[(1, 2)] = ONE;
    m[(2, 1)] = ONE;
    m[(3, 3)] = ONE;
    m
}

/// Closed-form coherent-state amplitudes `e^{-|α|²/2} α^n / √n!`.
pub fn coherent_amplitudes(alpha: C64, n: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(n);
    let mut cur = C64::from_polar((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for k in 0..n {
        out.push(cur);
        cur = cur * alpha / ((k + 1) as f64).sqrt();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, unitarity_error};

    #[test]
    fn ladder_n2() {
        let a = ladder(2);
        assert_eq!(a[(0, 1)], ONE);
        assert_eq!(a[(0, 0)] + a[(1, 0)] + a[(1, 1)], ZERO);
    }

    #[test]
    fn commutator_truncation_artifact() {
        let n = 6;
        let a = ladder(n);
        let comm = &a * a.adjoint() - a.adjoint() * &a;
        for k in 0..n {
            let want = if k == n - 1 { 1.0 - n as f64 } else { 1.0 };
            assert!((comm[(k, k)].re - want).abs() < 1e-12);
        }
    }

    #[test]
    fn displacement_matches_coherent_amplitudes() {
        let d = displacement(ONE, 64);
        let want = coherent_amplitudes(ONE, 11);
        for (k, w) in want.iter().enumerate() {
            assert!((d[(k, 0)] - w).norm() < 1e-8, "n={k}");
        }
    }

    #[test]
    fn displacement_inverse() {
        let a = c(1.2, -0.7);
        let p = displacement(a, 64) * displacement(-a, 64);
        assert!(max_abs_diff(&p, &identity(64)) < 1e-8);
    }

    #[test]
    fn jc_rabi_block() {
        let t = 0.37;
        let u = jaynes_cummings(t, 5);
        // |e,0> sits at local index 1*5 + 0, |g,1> at 0*5 + 1.
        assert!((u[(5, 5)] - c(t.cos(), 0.0)).norm() < 1e-10);
        assert!((u[(1, 5)] - c(0.0, -t.sin())).norm() < 1e-10);
        assert!((u[(0, 0)] - ONE).norm() < 1e-12);
    }

    #[test]
    fn cnot_flips_target() {
        let m = GateKind::Cnot.matrix(&[2, 2]).unwrap();
        assert_eq!(m[(3, 2)], ONE);
        assert_eq!(m[(1, 1)], ONE);
    }

    #[test]
    fn all_kinds_unitary() {
        let kinds = vec![
            GateKind::Displacement(c(0.8, 0.3)),
            GateKind::Squeeze(c(0.4, 0.1)),
            GateKind::Rotation(1.1),
            GateKind::Beamsplitter(0.7, 0.2),
            GateKind::Hopping(0.5),
            GateKind::ConditionalDisplacement(c(1.0, -0.5)),
            GateKind::ConditionalDisplacementAsym(c(0.3, 0.0), c(-0.2, 0.4)),
            GateKind::ConditionalRotation(0.9),
            GateKind::JaynesCummings(0.6),
            GateKind::Ecd(c(0.5, 0.5)),
            GateKind::Fourier,
            GateKind::U3(0.3, 0.4, 0.5),
            GateKind::Cnot,
        ];
        for k in kinds {
            let dims: Vec<usize> =
                k.wire_kinds().iter().map(|w| if *w == WireKind::Qubit { 2 } else { 7 }).collect();
            let m = k.matrix(&dims).unwrap();
            assert!(unitarity_error(&m) < 1e-10, "{}", k.name());
        }
    }
}
