//! Photon loss and qubit relaxation channels, gate durations, and
//! mixed-state fidelities.

use serde::{Deserialize, Serialize};

use crate::engine::{Circuit, GateOp};
use crate::error::{invalid, Error, Result};
use crate::gates::{ladder, GateClass};
use crate::hilbert::MixedState;
use crate::linalg::{c, diag, eigh, identity, max_abs_diff, sqrtm_psd, CMatrix, C64, ONE, ZERO};
use crate::special::displacement_elements;

/// Durations of gates the `|parameter|/χ` rule does not cover.
///
/// The defaults were fitted once so that the cat circuit (α = 2) totals
/// 0.8 μs and the nine-stage GKP circuit totals 5.6 μs, then frozen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DurationTable {
    /// Seconds per single- or two-qubit gate.
    pub qubit_gate: f64,
    /// Seconds per qumode-only Gaussian gate.
    pub qumode_gate: f64,
}

impl Default for DurationTable {
    fn default() -> Self {
        DurationTable { qubit_gate: 54.6e-9, qumode_gate: 0.983e-6 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    /// Cavity decay rate, 1/s.
    pub kappa: f64,
    /// Qubit-cavity coupling as an angular rate, rad/s. Hybrid gates take
    /// `|parameter| / chi` seconds.
    pub chi: f64,
    pub t1: f64,
    pub t2: f64,
    /// Largest tolerated Kraus completeness deficit.
    pub kraus_tol: f64,
    #[serde(default)]
    pub durations: DurationTable,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            kappa: 1.0e3,
            chi: 2.0 * std::f64::consts::PI * 1.0e6,
            t1: 30e-6,
            // 65 μs is often quoted alongside T1 = 30 μs but exceeds 2 T1;
            // default to the T1 limit instead.
            t2: 60e-6,
            kraus_tol: 1e-9,
            durations: DurationTable::default(),
        }
    }
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        let pos = [("kappa", self.kappa), ("chi", self.chi), ("t1", self.t1), ("t2", self.t2)];
        if let Some((k, v)) = pos.iter().find(|(_, v)| !(*v > 0.0)) {
            return Err(invalid("noise", format!("{k} must be positive, got {v}")));
        }
        if self.t2 > 2.0 * self.t1 {
            return Err(invalid("noise", format!("T2 = {} exceeds 2 T1 = {}", self.t2, 2.0 * self.t1)));
        }
        Ok(())
    }

    pub fn with_kappa(&self, kappa: f64) -> Self {
        NoiseModel { kappa, ..self.clone() }
    }

    pub fn gate_duration(&self, op: &GateOp) -> f64 {
        match op.class() {
            GateClass::Hybrid => op.kind.parameter_magnitude() / self.chi,
            GateClass::Qubit => self.durations.qubit_gate,
            GateClass::Qumode => self.durations.qumode_gate,
        }
    }

    pub fn circuit_duration(&self, circuit: &Circuit) -> f64 {
        circuit.ops.iter().map(|op| if op.duration > 0.0 { op.duration } else { self.gate_duration(op) }).sum()
    }

    /// Decay every wire of `rho` for `t` seconds.
    pub fn apply_idle(&self, rho: &mut MixedState, t: f64) -> Result<()> {
        if t <= 0.0 {
            return Ok(());
        }
        let layout = rho.layout.clone();
        if layout.qubits > 0 {
            let k = qubit_decay_kraus(self.t1, self.t2, t)?;
            for q in 0..layout.qubits {
                rho.apply_kraus(&k, &[q])?;
            }
        }
        for (j, &n) in layout.cutoffs.iter().enumerate() {
            let k = photon_loss_kraus(self.kappa, t, n, self.kraus_tol)?;
            rho.apply_kraus(&k, &[layout.qubits + j])?;
        }
        Ok(())
    }
}

/// `K_m = √((1-e^{-κt})^m / m!) e^{-κt n/2} a^m`, keeping terms until the
/// completeness deficit is below `tol`.
pub fn photon_loss_kraus(kappa: f64, t: f64, n: usize, tol: f64) -> Result<Vec<CMatrix>> {
    if t < 0.0 || kappa < 0.0 {
        return Err(invalid("noise", "negative loss time or rate"));
    }
    let eta = (-kappa * t).exp();
    let gamma = 1.0 - eta;
    let damp = diag(&(0..n).map(|k| c(eta.powf(k as f64 / 2.0), 0.0)).collect::<Vec<_>>());
    let a = ladder(n);
    let mut out = Vec::new();
    let mut am = identity(n);
    let mut sum = CMatrix::zeros(n, n);
    let mut coeff = 1.0;
    for m in 0..n {
        if m > 0 {
            am = &am * &a;
            coeff *= gamma / m as f64;
        }
        let k = &damp * &am * c(coeff.sqrt(), 0.0);
        sum += k.adjoint() * &k;
        out.push(k);
        if gamma == 0.0 || max_abs_diff(&sum, &identity(n)) <= 1e-14 {
            break;
        }
    }
    let deficit = max_abs_diff(&sum, &identity(n));
    if deficit > tol {
        return Err(Error::KrausIncomplete { deficit, tol });
    }
    Ok(out)
}

/// Amplitude damping (`γ = 1 - e^{-t/T1}`) followed by pure dephasing tuned
/// so off-diagonals decay as `e^{-t/T2}`.
pub fn qubit_decay_kraus(t1: f64, t2: f64, t: f64) -> Result<Vec<CMatrix>> {
    if t2 > 2.0 * t1 {
        return Err(invalid("noise", format!("T2 = {t2} exceeds 2 T1")));
    }
    if t < 0.0 {
        return Err(invalid("noise", "negative duration"));
    }
    let gamma = 1.0 - (-t / t1).exp();
    let a0 = diag(&[ONE, c((1.0 - gamma).sqrt(), 0.0)]);
    let mut a1 = CMatrix::zeros(2, 2);
    a1[(0, 1)] = c(gamma.sqrt(), 0.0);
    let rate_phi = 1.0 / t2 - 0.5 / t1;
    let lambda = (-t * rate_phi).exp();
    let p0 = c(((1.0 + lambda) / 2.0).sqrt(), 0.0);
    let p1 = c(((1.0 - lambda) / 2.0).sqrt(), 0.0);
    let z = diag(&[ONE, -ONE]);
    let mut out = Vec::with_capacity(4);
    for d in [identity(2) * p0, z * p1] {
        for a in [&a0, &a1] {
            let k = &d * a;
            if k.iter().any(|v| *v != ZERO) {
                out.push(k);
            }
        }
    }
    Ok(out)
}

pub fn kraus_completeness(kraus: &[CMatrix]) -> f64 {
    let n = kraus[0].nrows();
    let sum = kraus.iter().fold(CMatrix::zeros(n, n), |acc, k| acc + k.adjoint() * k);
    max_abs_diff(&sum, &identity(n))
}

/// `(Tr √(√ρ σ √ρ))²`, clamped to `[0, 1]`.
pub fn uhlmann_fidelity(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    if rho.shape() != sigma.shape() {
        return Err(Error::DimensionMismatch { expected: rho.nrows(), got: sigma.nrows() });
    }
    for m in [rho, sigma] {
        let (vals, _) = eigh(m);
        if vals.first().copied().unwrap_or(0.0) < -1e-8 {
            return Err(invalid("noise", "fidelity input is not positive semidefinite"));
        }
    }
    let sr = sqrtm_psd(rho);
    let inner = &sr * sigma * &sr;
    let (vals, _) = eigh(&inner);
    let tr: f64 = vals.iter().map(|v| v.max(0.0).sqrt()).sum();
    Ok((tr * tr).clamp(0.0, 1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharGrid {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    /// `values[i][j] = χ(re[i] + i im[j])`
    pub values: Vec<Vec<C64>>,
}

pub fn default_beta_axis() -> Vec<f64> {
    crate::engine::linspace(-4.0, 4.0, 81)
}

/// `χ(β) = Tr[ρ D(β)]` of a single-mode state on the product grid.
pub fn characteristic_function(rho_mode: &MixedState, re: &[f64], im: &[f64]) -> Result<CharGrid> {
    if rho_mode.layout.qubits != 0 || rho_mode.layout.modes() != 1 {
        return Err(invalid("noise", "characteristic function needs a single-mode state"));
    }
    let n = rho_mode.dim();
    let rho = rho_mode.matrix();
    let mut values = Vec::with_capacity(re.len());
    for &x in re {
        let mut row = Vec::with_capacity(im.len());
        for &y in im {
            let d = displacement_elements(C64::new(x, y), n);
            let mut tr = ZERO;
            for a in 0..n {
                for b in 0..n {
                    tr += rho[(a, b)] * d[(b, a)];
                }
            }
            row.push(tr);
        }
        values.push(row);
    }
    let grid = CharGrid { re: re.to_vec(), im: im.to_vec(), values };
    let edge = boundary_max(&grid);
    if edge > 0.01 {
        return Err(invalid("noise", format!("β grid too small: |χ| = {edge:.3} on the boundary")));
    }
    Ok(grid)
}

fn boundary_max(g: &CharGrid) -> f64 {
    let (nr, ni) = (g.re.len(), g.im.len());
    let mut m: f64 = 0.0;
    for i in 0..nr {
        for j in 0..ni {
            if i == 0 || j == 0 || i == nr - 1 || j == ni - 1 {
                m = m.max(g.values[i][j].norm());
            }
        }
    }
    m
}

/// `(1/π) ∬ χ_a χ_b* d²β` by the 2-D trapezoid rule.
pub fn cf_fidelity(a: &CharGrid, b: &CharGrid) -> Result<f64> {
    if a.re != b.re || a.im != b.im {
        return Err(invalid("noise", "characteristic grids differ"));
    }
    let w = |axis: &[f64], i: usize| -> f64 {
        let n = axis.len();
        let left = if i > 0 { axis[i] - axis[i - 1] } else { 0.0 };
        let right = if i + 1 < n { axis[i + 1] - axis[i] } else { 0.0 };
        0.5 * (left + right)
    };
    let mut acc = 0.0;
    for i in 0..a.re.len() {
        for j in 0..a.im.len() {
            acc += w(&a.re, i) * w(&a.im, j) * (a.values[i][j] * b.values[i][j].conj()).re;
        }
    }
    Ok(acc / std::f64::consts::PI)
}
