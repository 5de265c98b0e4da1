//! Phase-space and resource metrics for hybrid circuits.

mod cluster;

pub use cluster::{cut_tree, ward_cluster, zscore_columns, Linkage, Merge};

use serde::{Deserialize, Serialize};

use crate::engine::{circuit_features, measure_fock, run_pure, Circuit, StructuralFeatures};
use crate::error::{invalid, Error, Result};
use crate::hilbert::{MixedState, PureState, Wire};
use crate::linalg::C64;
use crate::special::{laguerre_table, ln_factorial};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    /// `values[i][j] = W(x[i], p[j])`
    pub values: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub half_width: f64,
    pub points: usize,
}

impl GridSpec {
    /// 201 × 201 points over `[-L, L]²` with `L = √(2N) + 3`.
    pub fn for_cutoff(n: usize) -> Self {
        GridSpec { half_width: (2.0 * n as f64).sqrt() + 3.0, points: 201 }
    }

    pub fn axis(&self) -> Vec<f64> {
        crate::engine::linspace(-self.half_width, self.half_width, self.points)
    }
}

/// Wigner function of a single-mode density matrix from the Laguerre kernel
/// `W_{mn}` with `x = √2 Re α`, `p = √2 Im α`.
pub fn wigner(rho_mode: &MixedState, grid: &GridSpec) -> Result<WignerGrid> {
    if rho_mode.layout.qubits != 0 || rho_mode.layout.modes() != 1 {
        return Err(invalid("metrics", "Wigner function needs a single-mode state"));
    }
    if grid.points < 2 || !(grid.half_width > 0.0) {
        return Err(invalid("metrics", "degenerate Wigner grid"));
    }
    let n = rho_mode.dim();
    let rho = rho_mode.matrix();
    if crate::linalg::hermiticity_error(&rho) > 1e-8 {
        return Err(invalid("metrics", "density matrix is not Hermitian"));
    }
    let lf: Vec<f64> = (0..n).map(ln_factorial).collect();
    // ratio[k][m] = √(m!/(m+k)!)
    let ratio: Vec<Vec<f64>> =
        (0..n).map(|k| (0..n - k).map(|m| (0.5 * (lf[m] - lf[m + k])).exp()).collect()).collect();
    let axis = grid.axis();
    let mut values = vec![vec![0.0; axis.len()]; axis.len()];
    for (i, &x) in axis.iter().enumerate() {
        for (j, &p) in axis.iter().enumerate() {
            let alpha = C64::new(x, p) / std::f64::consts::SQRT_2;
            let b = 4.0 * alpha.norm_sqr();
            let two_a = alpha * 2.0;
            let (r2, ph) = (two_a.norm(), if two_a.norm() > 0.0 { two_a / two_a.norm() } else { C64::new(1.0, 0.0) });
            let mut w = 0.0;
            let mut phase_k = C64::new(1.0, 0.0);
            for k in 0..n {
                if k > 0 {
                    phase_k *= ph;
                    if r2 == 0.0 {
                        break;
                    }
                }
                let lag = laguerre_table(n - k, k, b);
                let scale = if k == 0 { (-b / 2.0).exp() } else { 2.0 * (k as f64 * r2.ln() - b / 2.0).exp() };
                let mut acc = 0.0;
                for m in 0..n - k {
                    let rv = rho[(m, m + k)];
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    let term = if k == 0 { rv.re } else { (rv * phase_k).re };
                    acc += sign * ratio[k][m] * lag[m] * term;
                }
                w += scale * acc;
            }
            values[i][j] = w / std::f64::consts::PI;
        }
    }
    Ok(WignerGrid { x: axis.clone(), p: axis, values })
}

fn trapezoid_2d(g: &WignerGrid, f: impl Fn(f64) -> f64) -> f64 {
    let w = |axis: &[f64], i: usize| -> f64 {
        let left = if i > 0 { axis[i] - axis[i - 1] } else { 0.0 };
        let right = if i + 1 < axis.len() { axis[i + 1] - axis[i] } else { 0.0 };
        0.5 * (left + right)
    };
    let mut acc = 0.0;
    for i in 0..g.x.len() {
        for j in 0..g.p.len() {
            acc += w(&g.x, i) * w(&g.p, j) * f(g.values[i][j]);
        }
    }
    acc
}

pub fn wigner_integral(g: &WignerGrid) -> f64 {
    trapezoid_2d(g, |w| w)
}

/// Integral of the negative part of `W`.
pub fn wigner_negativity(g: &WignerGrid) -> f64 {
    trapezoid_2d(g, |w| (-w).max(0.0))
}

/// Default number of top Fock levels for the truncation cost.
pub fn default_truncation_k(n: usize) -> usize {
    (n / 4).max(1)
}

/// Population in the `k` highest Fock levels of one mode.
pub fn truncation_cost(state: &PureState, mode: usize, k: usize) -> Result<f64> {
    let p = measure_fock(state, mode)?;
    top_k(&p, k)
}

pub fn truncation_cost_mixed(rho_mode: &MixedState, k: usize) -> Result<f64> {
    top_k(&rho_mode.diagonal(), k)
}

fn top_k(p: &[f64], k: usize) -> Result<f64> {
    let n = p.len();
    if k == 0 || k > n {
        return Err(invalid("metrics", format!("truncation k = {k} outside 1..={n}")));
    }
    Ok(p[n - k..].iter().sum::<f64>().clamp(0.0, 1.0))
}

/// `Σ_j <n_j> + Σ_k <σz_k>` with `<0|σz|0> = +1`.
pub fn energy(state: &PureState) -> f64 {
    let layout = &state.layout;
    let dims = layout.dims();
    let strides = layout.strides();
    let mut e = 0.0;
    for (i, a) in state.amps.iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        for (w, (&d, &s)) in dims.iter().zip(&strides).enumerate() {
            let digit = (i / s) % d;
            if w < layout.qubits {
                e += p * if digit == 0 { 1.0 } else { -1.0 };
            } else {
                e += p * digit as f64;
            }
        }
    }
    e
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CvdvMetrics {
    pub energy: f64,
    pub negativity: f64,
    pub truncation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricOptions {
    /// Top-level count for the truncation cost; `None` uses `max(1, N/4)`.
    pub truncation_k: Option<usize>,
    /// Wigner grid points per axis.
    pub grid_points: usize,
    /// Evaluate the per-mode metrics every this many gates (and at the end).
    pub every: usize,
}

impl Default for MetricOptions {
    fn default() -> Self {
        MetricOptions { truncation_k: None, grid_points: 201, every: 1 }
    }
}

/// Per-step metric values of one state.
pub fn state_metrics(state: &PureState, opts: &MetricOptions) -> Result<CvdvMetrics> {
    let mut m = CvdvMetrics { energy: energy(state), ..Default::default() };
    for (j, &n) in state.layout.cutoffs.iter().enumerate() {
        let k = opts.truncation_k.unwrap_or_else(|| default_truncation_k(n)).min(n);
        m.truncation = m.truncation.max(truncation_cost(state, j, k)?);
        let w = state.layout.index(Wire::Mode(j))?;
        let rho = state.reduced(&[w])?;
        let grid = GridSpec { points: opts.grid_points, ..GridSpec::for_cutoff(n) };
        m.negativity = m.negativity.max(wigner_negativity(&wigner(&rho, &grid)?));
    }
    Ok(m)
}

/// Maxima of energy, negativity and truncation cost over the initial state
/// and the state after every gate.
pub fn track_maxima(circuit: &Circuit, initial: &PureState, opts: &MetricOptions) -> Result<CvdvMetrics> {
    let mut best = state_metrics(initial, opts)?;
    let mut err: Option<Error> = None;
    let every = opts.every.max(1);
    let last = circuit.ops.len().saturating_sub(1);
    let mut hook = |i: usize, s: &PureState| {
        if err.is_some() {
            return;
        }
        let e = energy(s);
        best.energy = best.energy.max(e);
        if (i + 1).is_multiple_of(every) || i == last {
            match state_metrics(s, opts) {
                Ok(m) => {
                    best.negativity = best.negativity.max(m.negativity);
                    best.truncation = best.truncation.max(m.truncation);
                }
                Err(e) => err = Some(e),
            }
        }
    };
    run_pure(circuit, initial, Some(&mut hook))?;
    match err {
        Some(e) => Err(e),
        None => Ok(best),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub name: String,
    pub structural: StructuralFeatures,
    pub raw: CvdvMetrics,
    pub normalized: Option<CvdvMetrics>,
    /// Suite maxima used as denominators.
    pub denominators: Option<CvdvMetrics>,
}

impl FeatureVector {
    pub fn new(name: &str, circuit: &Circuit, raw: CvdvMetrics) -> Self {
        FeatureVector {
            name: name.to_string(),
            structural: circuit_features(circuit),
            raw,
            normalized: None,
            denominators: None,
        }
    }

    /// Nine columns in table order: structure, then normalized (or raw) metrics.
    pub fn row(&self) -> Vec<f64> {
        let s = &self.structural;
        let m = self.normalized.as_ref().unwrap_or(&self.raw);
        vec![
            s.qubits as f64,
            s.qumodes as f64,
            s.qubit_gates as f64,
            s.qumode_gates as f64,
            s.hybrid_gates as f64,
            s.depth as f64,
            m.energy,
            m.negativity,
            m.truncation,
        ]
    }
}

/// Divide each metric by its maximum over the suite. Returns notes for
/// all-zero columns, which are left at zero.
pub fn normalize_suite(reports: &mut [FeatureVector]) -> Result<Vec<String>> {
    if reports.is_empty() {
        return Err(invalid("metrics", "empty suite"));
    }
    let max_of = |f: fn(&CvdvMetrics) -> f64| reports.iter().map(|r| f(&r.raw)).fold(0.0, f64::max);
    let den = CvdvMetrics {
        energy: max_of(|m| m.energy),
        negativity: max_of(|m| m.negativity),
        truncation: max_of(|m| m.truncation),
    };
    let mut notes = Vec::new();
    for (name, v) in [("energy", den.energy), ("negativity", den.negativity), ("truncation", den.truncation)] {
        if v == 0.0 {
            notes.push(format!("{name} is zero across the suite; left unnormalized"));
        }
    }
    let div = |a: f64, b: f64| if b == 0.0 { 0.0 } else { a / b };
    for r in reports.iter_mut() {
        r.normalized = Some(CvdvMetrics {
            energy: div(r.raw.energy, den.energy),
            negativity: div(r.raw.negativity, den.negativity),
            truncation: div(r.raw.truncation, den.truncation),
        });
        r.denominators = Some(den.clone());
    }
    Ok(notes)
}
