//! Register layouts, pure and mixed states, and the strided operator
//! embedding every executor goes through.
//!
//! # Ordering convention
//!
//! Wires are numbered qubits first (`0..qubits`), then qumodes
//! (`qubits..qubits + modes`). Amplitude indexing is little-endian in wire
//! number: wire 0 has stride 1, wire `w` has stride `d_0 * ... * d_{w-1}`.
//! So for two qubits the amplitude of `|q1 q0>` sits at `q0 + 2 q1`.
//!
//! A local operator acting on targets `[t_0, t_1, ...]` is indexed like a
//! Kronecker product `A_{t_0} ⊗ A_{t_1} ⊗ ...`: the first target is the most
//! significant local digit. A hybrid (qubit, mode) gate is therefore
//! `kron(qubit_part, mode_part)`.
//!
//! Qubit basis: `|0>` has `<0|σz|0> = +1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ZERO};

pub const DEFAULT_PURE_CAP: usize = 1 << 26;
pub const DEFAULT_DENSITY_CAP: usize = 1 << 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Wire {
    Qubit(usize),
    Mode(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemLayout {
    pub qubits: usize,
    pub cutoffs: Vec<usize>,
}

impl SystemLayout {
    pub fn new(qubits: usize, cutoffs: Vec<usize>) -> Result<Self> {
        if let Some(&n) = cutoffs.iter().find(|&&n| n < 2) {
            return Err(crate::error::invalid("hilbert", format!("cutoff {n} < 2")));
        }
        let layout = SystemLayout { qubits, cutoffs };
        layout.checked_dim(DEFAULT_PURE_CAP)?;
        Ok(layout)
    }

    pub fn modes(&self) -> usize {
        self.cutoffs.len()
    }

    pub fn wire_count(&self) -> usize {
        self.qubits + self.cutoffs.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        let mut d = vec![2; self.qubits];
        d.extend_from_slice(&self.cutoffs);
        d
    }

    pub fn wire_dim(&self, w: usize) -> usize {
        if w < self.qubits {
            2
        } else {
            self.cutoffs[w - self.qubits]
        }
    }

    pub fn dim(&self) -> usize {
        self.dims().iter().product()
    }

    pub fn checked_dim(&self, cap: usize) -> Result<usize> {
        let mut d: usize = 1;
        for n in self.dims() {
            d = d.checked_mul(n).filter(|&d| d <= cap).ok_or(Error::DimensionCap {
                dim: d.saturating_mul(n),
                cap,
                what: "state",
            })?;
        }
        Ok(d)
    }

    /// Flat wire number of a qubit or qumode.
    pub fn index(&self, w: Wire) -> Result<usize> {
        match w {
            Wire::Qubit(i) if i < self.qubits => Ok(i),
            Wire::Mode(j) if j < self.modes() => Ok(self.qubits + j),
            _ => Err(Error::InvalidWire(format!("{w:?} in {}q/{}m layout", self.qubits, self.modes()))),
        }
    }

    pub fn wire(&self, flat: usize) -> Wire {
        if flat < self.qubits {
            Wire::Qubit(flat)
        } else {
            Wire::Mode(flat - self.qubits)
        }
    }

    pub fn strides(&self) -> Vec<usize> {
        strides_of(&self.dims())
    }

    /// Layout of the sub-register made of `keep` (flat wire numbers, any order);
    /// the result follows canonical order.
    pub fn sub_layout(&self, keep: &[usize]) -> SystemLayout {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        let qubits = keep.iter().filter(|&&w| w < self.qubits).count();
        let cutoffs = keep.iter().filter(|&&w| w >= self.qubits).map(|&w| self.wire_dim(w)).collect();
        SystemLayout { qubits, cutoffs }
    }
}

pub(crate) fn strides_of(dims: &[usize]) -> Vec<usize> {
    let mut s = Vec::with_capacity(dims.len());
    let mut acc = 1;
    for &d in dims {
        s.push(acc);
        acc *= d;
    }
    s
}

/// A local operator prepared for repeated strided application on a register
/// with the given wire dimensions.
#[derive(Clone, Debug)]
pub struct Embedding {
    offsets: Vec<usize>,
    rows: Vec<Vec<(usize, C64)>>,
    diagonal: Option<Vec<C64>>,
    bases: Vec<usize>,
}

impl Embedding {
    pub fn new(local: &CMatrix, dims: &[usize], targets: &[usize]) -> Result<Self> {
        let n = dims.len();
        for (k, &t) in targets.iter().enumerate() {
            if t >= n || targets[..k].contains(&t) {
                return Err(Error::InvalidWire(format!("target {t} of {n} wires")));
            }
        }
        let local_dim: usize = targets.iter().map(|&t| dims[t]).product();
        if local.nrows() != local_dim || local.ncols() != local_dim {
            return Err(Error::DimensionMismatch { expected: local_dim, got: local.nrows() });
        }
        let strides = strides_of(dims);
        let mut offsets = vec![0usize; local_dim];
        for (l, off) in offsets.iter_mut().enumerate() {
            let mut rem = l;
            for &t in targets.iter().rev() {
                *off += (rem % dims[t]) * strides[t];
                rem /= dims[t];
            }
        }
        let mut rows = Vec::with_capacity(local_dim);
        let mut is_diag = true;
        for r in 0..local_dim {
            let row: Vec<(usize, C64)> = (0..local_dim)
                .filter_map(|c| {
                    let v = local[(r, c)];
                    (v != ZERO).then_some((c, v))
                })
                .collect();
            if row.iter().any(|&(c, _)| c != r) {
                is_diag = false;
            }
            rows.push(row);
        }
        let diagonal = is_diag.then(|| (0..local_dim).map(|r| local[(r, r)]).collect());

        let others: Vec<usize> = (0..n).filter(|w| !targets.contains(w)).collect();
        let total: usize = others.iter().map(|&w| dims[w]).product();
        let mut bases = Vec::with_capacity(total);
        let mut digits = vec![0usize; others.len()];
        let mut base = 0usize;
        for _ in 0..total {
            bases.push(base);
            for (k, &w) in others.iter().enumerate() {
                digits[k] += 1;
                base += strides[w];
                if digits[k] < dims[w] {
                    break;
                }
                base -= digits[k] * strides[w];
                digits[k] = 0;
            }
        }
        Ok(Embedding { offsets, rows, diagonal, bases })
    }

    pub fn apply(&self, amps: &mut [C64]) {
        if let Some(d) = &self.diagonal {
            for &b in &self.bases {
                for (off, &v) in self.offsets.iter().zip(d) {
                    amps[b + off] *= v;
                }
            }
            return;
        }
        let mut buf = vec![ZERO; self.offsets.len()];
        for &b in &self.bases {
            for (x, off) in buf.iter_mut().zip(&self.offsets) {
                *x = amps[b + off];
            }
            for (row, off) in self.rows.iter().zip(&self.offsets) {
                let mut acc = ZERO;
                for &(c, v) in row {
                    acc += v * buf[c];
                }
                amps[b + off] = acc;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    pub layout: SystemLayout,
    pub amps: Vec<C64>,
}

pub fn vacuum_state(layout: &SystemLayout) -> Result<PureState> {
    let d = layout.checked_dim(DEFAULT_PURE_CAP)?;
    let mut amps = vec![ZERO; d];
    amps[0] = C64::new(1.0, 0.0);
    Ok(PureState { layout: layout.clone(), amps })
}

pub fn fock_state(layout: &SystemLayout, mode: usize, n: usize) -> Result<PureState> {
    let w = layout.index(Wire::Mode(mode))?;
    if n >= layout.wire_dim(w) {
        return Err(crate::error::invalid("hilbert", format!("Fock level {n} >= cutoff {}", layout.wire_dim(w))));
    }
    let mut s = vacuum_state(layout)?;
    s.amps[0] = ZERO;
    s.amps[n * layout.strides()[w]] = C64::new(1.0, 0.0);
    Ok(s)
}

/// Product state from per-wire local vectors given in canonical wire order.
pub fn product_state(layout: &SystemLayout, locals: &[Vec<C64>]) -> Result<PureState> {
    let dims = layout.dims();
    if locals.len() != dims.len() {
        return Err(Error::DimensionMismatch { expected: dims.len(), got: locals.len() });
    }
    let mut amps = vec![C64::new(1.0, 0.0)];
    for (v, &d) in locals.iter().zip(&dims) {
        if v.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: v.len() });
        }
        // New wire is more significant than everything before it.
        let mut next = Vec::with_capacity(amps.len() * d);
        for &x in v {
            next.extend(amps.iter().map(|&a| a * x));
        }
        amps = next;
    }
    let mut s = PureState { layout: layout.clone(), amps };
    s.normalize();
    Ok(s)
}

impl PureState {
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for a in &mut self.amps {
                *a /= n;
            }
        }
    }

    /// `<self|other>`
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch);
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn apply_local(&mut self, local: &CMatrix, targets: &[usize]) -> Result<()> {
        Embedding::new(local, &self.layout.dims(), targets)?.apply(&mut self.amps);
        Ok(())
    }

    /// Expectation of a local operator on the given flat wires.
    pub fn expect_local(&self, local: &CMatrix, targets: &[usize]) -> Result<C64> {
        let mut tmp = self.clone();
        tmp.apply_local(local, targets)?;
        self.inner(&tmp)
    }

    pub fn to_density(&self) -> Result<MixedState> {
        MixedState::from_pure(self)
    }

    /// Reduced density matrix of the wires in `keep` (canonical order in the result).
    pub fn reduced(&self, keep: &[usize]) -> Result<MixedState> {
        let (layout, a) = split_amplitudes(&self.layout, &self.amps, keep)?;
        let rho = &a * a.adjoint();
        Ok(MixedState::from_matrix(layout, &rho))
    }

    pub fn mode_reduced(&self, mode: usize) -> Result<MixedState> {
        let w = self.layout.index(Wire::Mode(mode))?;
        self.reduced(&[w])
    }
}

/// Reshape amplitudes as a (kept × environment) matrix.
fn split_amplitudes(layout: &SystemLayout, amps: &[C64], keep: &[usize]) -> Result<(SystemLayout, CMatrix)> {
    let n = layout.wire_count();
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() || keep.iter().any(|&w| w >= n) {
        return Err(Error::InvalidWire(format!("keep set {keep:?}")));
    }
    let dims = layout.dims();
    let env: Vec<usize> = (0..n).filter(|w| !keep.contains(w)).collect();
    let dk: usize = keep.iter().map(|&w| dims[w]).product();
    let de: usize = env.iter().map(|&w| dims[w]).product();
    let mut a = CMatrix::zeros(dk, de);
    let kstr = strides_of(&keep.iter().map(|&w| dims[w]).collect::<Vec<_>>());
    let estr = strides_of(&env.iter().map(|&w| dims[w]).collect::<Vec<_>>());
    for (idx, &amp) in amps.iter().enumerate() {
        let (mut rem, mut ki, mut ei) = (idx, 0, 0);
        for w in 0..n {
            let digit = rem % dims[w];
            rem /= dims[w];
            if let Some(p) = keep.iter().position(|&k| k == w) {
                ki += digit * kstr[p];
            } else {
                let p = env.iter().position(|&e| e == w).unwrap();
                ei += digit * estr[p];
            }
        }
        a[(ki, ei)] = amp;
    }
    Ok((layout.sub_layout(&keep), a))
}

/// Density matrix stored row-major (`data[r * d + c]`).
///
/// Viewed as a vector, the row index is the more significant half, so the
/// column wires occupy flat positions `0..n` and the row wires `n..2n`;
/// this lets the same strided kernel act on either side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedState {
    pub layout: SystemLayout,
    pub data: Vec<C64>,
}

impl MixedState {
    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn from_pure(psi: &PureState) -> Result<Self> {
        let d = psi.layout.checked_dim(DEFAULT_DENSITY_CAP)?;
        let mut data = vec![ZERO; d * d];
        for r in 0..d {
            let a = psi.amps[r];
            if a == ZERO {
                continue;
            }
            for c in 0..d {
                data[r * d + c] = a * psi.amps[c].conj();
            }
        }
        Ok(MixedState { layout: psi.layout.clone(), data })
    }

    pub fn from_matrix(layout: SystemLayout, m: &CMatrix) -> Self {
        let d = m.nrows();
        let mut data = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                data.push(m[(r, c)]);
            }
        }
        MixedState { layout, data }
    }

    pub fn matrix(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_row_slice(d, d, &self.data)
    }

    pub fn trace(&self) -> C64 {
        let d = self.dim();
        (0..d).map(|i| self.data[i * d + i]).sum()
    }

    pub fn purity(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|i| self.data[i * d + i].re).collect()
    }

    fn doubled_dims(&self) -> Vec<usize> {
        let mut dims = self.layout.dims();
        dims.extend(self.layout.dims());
        dims
    }

    /// `ρ → A ρ B†` for local operators `A`, `B` on the same targets.
    pub fn sandwich(&mut self, left: &CMatrix, right: &CMatrix, targets: &[usize]) -> Result<()> {
        let n = self.layout.wire_count();
        let dims = self.doubled_dims();
        let row_targets: Vec<usize> = targets.iter().map(|&t| t + n).collect();
        Embedding::new(left, &dims, &row_targets)?.apply(&mut self.data);
        Embedding::new(&right.map(|z| z.conj()), &dims, targets)?.apply(&mut self.data);
        Ok(())
    }

    pub fn apply_unitary(&mut self, u: &CMatrix, targets: &[usize]) -> Result<()> {
        self.sandwich(u, u, targets)
    }

    /// `ρ → Σ_k K_k ρ K_k†`
    pub fn apply_kraus(&mut self, kraus: &[CMatrix], targets: &[usize]) -> Result<()> {
        if kraus.len() == 1 {
            return self.apply_unitary(&kraus[0], targets);
        }
        let mut acc = vec![ZERO; self.data.len()];
        for k in kraus {
            let mut term = self.clone();
            term.sandwich(k, k, targets)?;
            for (a, t) in acc.iter_mut().zip(&term.data) {
                *a += t;
            }
        }
        self.data = acc;
        Ok(())
    }

    pub fn expect_local(&self, local: &CMatrix, targets: &[usize]) -> Result<C64> {
        // `reduced` returns wires in canonical order, so the operator must match it.
        if targets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidWire("expect_local needs ascending targets".into()));
        }
        let red = self.reduced(targets)?;
        Ok(crate::linalg::trace(&(red.matrix() * local)))
    }

    pub fn reduced(&self, keep: &[usize]) -> Result<MixedState> {
        let n = self.layout.wire_count();
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() || keep.iter().any(|&w| w >= n) {
            return Err(Error::InvalidWire(format!("keep set {keep:?}")));
        }
        if keep.len() == n {
            return Ok(self.clone());
        }
        let dims = self.layout.dims();
        let strides = self.layout.strides();
        let env: Vec<usize> = (0..n).filter(|w| !keep.contains(w)).collect();
        let kdims: Vec<usize> = keep.iter().map(|&w| dims[w]).collect();
        let dk: usize = kdims.iter().product();
        let de: usize = env.iter().map(|&w| dims[w]).product();
        let flat_of = |list: &[usize], mut idx: usize| -> usize {
            let mut f = 0;
            for &w in list {
                f += (idx % dims[w]) * strides[w];
                idx /= dims[w];
            }
            f
        };
        let kflat: Vec<usize> = (0..dk).map(|i| flat_of(&keep, i)).collect();
        let eflat: Vec<usize> = (0..de).map(|i| flat_of(&env, i)).collect();
        let d = self.dim();
        let mut out = CMatrix::zeros(dk, dk);
        for (i, &ki) in kflat.iter().enumerate() {
            for (j, &kj) in kflat.iter().enumerate() {
                out[(i, j)] = eflat.iter().map(|&e| self.data[(ki + e) * d + kj + e]).sum();
            }
        }
        Ok(MixedState::from_matrix(self.layout.sub_layout(&keep), &out))
    }

    pub fn mode_reduced(&self, mode: usize) -> Result<MixedState> {
        let w = self.layout.index(Wire::Mode(mode))?;
        self.reduced(&[w])
    }
}

/// `|<a|b>|²`
pub fn overlap_fidelity(a: &PureState, b: &PureState) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().clamp(0.0, 1.0))
}

/// `<ψ|ρ|ψ>` fidelity of a mixed state with a pure target.
pub fn pure_mixed_fidelity(psi: &PureState, rho: &MixedState) -> Result<f64> {
    if psi.layout != rho.layout {
        return Err(Error::LayoutMismatch);
    }
    let d = rho.dim();
    let mut acc = ZERO;
    for r in 0..d {
        let pr = psi.amps[r].conj();
        if pr == ZERO {
            continue;
        }
        let row = &rho.data[r * d..(r + 1) * d];
        let s: C64 = row.iter().zip(&psi.amps).map(|(x, y)| x * y).sum();
        acc += pr * s;
    }
    Ok(acc.re.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ONE};

    #[test]
    fn vacuum_amplitude() {
        let l = SystemLayout::new(1, vec![4]).unwrap();
        let v = vacuum_state(&l).unwrap();
        assert_eq!(v.amps[0], ONE);
        assert!(v.amps[1..].iter().all(|&a| a == ZERO));
        assert!((v.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn x_on_qubit0_flips_least_significant_bit() {
        let l = SystemLayout::new(2, vec![]).unwrap();
        let mut s = vacuum_state(&l).unwrap();
        let x = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        s.apply_local(&x, &[0]).unwrap();
        assert_eq!(s.amps[1], ONE);
    }

    #[test]
    fn fock_level_past_cutoff_is_rejected() {
        let l = SystemLayout::new(0, vec![3]).unwrap();
        assert!(fock_state(&l, 0, 3).is_err());
    }

    #[test]
    fn dimension_cap_is_enforced() {
        assert!(matches!(SystemLayout::new(0, vec![1 << 14, 1 << 14]), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn reduced_of_product_is_pure() {
        let l = SystemLayout::new(1, vec![3]).unwrap();
        let s = product_state(&l, &[vec![ONE, ONE], vec![c(0.3, 0.0), c(0.0, 0.4), ONE]]).unwrap();
        let rq = s.reduced(&[0]).unwrap();
        assert!((rq.purity() - 1.0).abs() < 1e-12);
        let rm = s.to_density().unwrap().reduced(&[1]).unwrap();
        assert!((rm.purity() - 1.0).abs() < 1e-12);
        assert!((rm.trace().re - 1.0).abs() < 1e-12);
    }
}
