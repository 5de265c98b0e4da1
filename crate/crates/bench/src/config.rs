//! Run configuration: one TOML document, every field defaulted, unknown
//! keys rejected.

use cvdv_core::metrics::MetricOptions;
use cvdv_core::NoiseModel;
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub seed: u64,
    pub jobs: usize,
    /// Benchmarks to run; empty means all.
    pub benchmarks: Vec<String>,
    pub metrics: MetricConfig,
    pub noise: NoiseModel,
    pub state_transfer: TransferConfig,
    pub cat: CatConfig,
    pub gkp: GkpConfig,
    pub qft: QftConfig,
    pub vqe: VqeConfig,
    pub qaoa: QaoaConfig,
    pub jch: JchConfig,
    pub shor: ShorConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 7,
            jobs: 1,
            benchmarks: Vec::new(),
            metrics: MetricConfig::default(),
            noise: NoiseModel::default(),
            state_transfer: TransferConfig::default(),
            cat: CatConfig::default(),
            gkp: GkpConfig::default(),
            qft: QftConfig::default(),
            vqe: VqeConfig::default(),
            qaoa: QaoaConfig::default(),
            jch: JchConfig::default(),
            shor: ShorConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MetricConfig {
    /// Top Fock levels counted by the truncation cost; unset uses `N/4`.
    pub truncation_k: Option<usize>,
    pub grid_points: usize,
    /// Wigner and truncation evaluated every this many gates (energy is
    /// tracked after every gate regardless).
    pub every: usize,
    /// Cap on `every × cutoff² × grid²` work: benchmarks whose per-gate
    /// Wigner cost exceeds it are sampled more sparsely.
    pub budget: f64,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig { truncation_k: None, grid_points: 101, every: 1, budget: 4e9 }
    }
}

impl MetricConfig {
    /// Options for a circuit of `gates` gates whose largest mode has `cutoff`
    /// levels, thinned to stay within the work budget.
    pub fn options_for(&self, gates: usize, cutoff: usize) -> MetricOptions {
        let per_eval = (cutoff * cutoff) as f64 * (self.grid_points * self.grid_points) as f64 / 2.0;
        let evals = (self.budget / per_eval.max(1.0)).max(1.0);
        let every = ((gates as f64 / evals).ceil() as usize).max(self.every).max(1);
        MetricOptions { truncation_k: self.truncation_k, grid_points: self.grid_points, every }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransferConfig {
    pub qubits: usize,
    pub cutoff: usize,
    pub delta: f64,
    /// Register value loaded by the DV -> CV run (noisy row).
    pub dv_input: usize,
    /// Even-cat amplitude for the CV -> DV histogram; lobes sit at
    /// `x = ±√2 α` and should fall inside the `±2^{n-1} Δ` window.
    pub cat_alpha: f64,
}

impl Default for TransferConfig {
    fn default() -> Self {
        TransferConfig { qubits: 4, cutoff: 64, delta: 0.39, dv_input: 0, cat_alpha: 1.5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CatConfig {
    pub alpha: f64,
    pub cutoff: usize,
}

impl Default for CatConfig {
    fn default() -> Self {
        CatConfig { alpha: 2.0, cutoff: 32 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GkpConfig {
    /// Squeezer plus cat rounds.
    pub stages: usize,
    pub squeeze: f64,
    pub cutoff: usize,
    /// Envelope of the target comb; unset uses the squeeze value.
    pub envelope: Option<f64>,
}

impl Default for GkpConfig {
    fn default() -> Self {
        GkpConfig { stages: 9, squeeze: 0.222, cutoff: 64, envelope: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QftConfig {
    pub n: usize,
    pub ancilla: usize,
    pub append: usize,
    pub cutoff: usize,
    pub spacing: f64,
    pub pre_shift: f64,
    pub post_shift: f64,
    /// Basis state of the data register.
    pub input: usize,
}

impl Default for QftConfig {
    fn default() -> Self {
        QftConfig { n: 2, ancilla: 1, append: 2, cutoff: 16, spacing: 0.29, pre_shift: 0.0, post_shift: 0.0, input: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VqeConfig {
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
    pub capacity: f64,
    pub depth: usize,
    pub cutoffs: [usize; 2],
    /// Unset uses `Σ values + 1`.
    pub penalty: Option<f64>,
    pub optimizer: String,
    pub restarts: usize,
    pub max_iters: u64,
    /// Half-width of the uniform draw for every start.
    pub spread: f64,
}

impl Default for VqeConfig {
    fn default() -> Self {
        VqeConfig {
            values: vec![1.0, 4.0, 5.0, 10.0],
            weights: vec![2.5, 1.0, 2.0, 3.0],
            capacity: 7.0,
            depth: 5,
            cutoffs: [8, 8],
            penalty: None,
            optimizer: "bfgs".into(),
            restarts: 5,
            max_iters: 1000,
            spread: std::f64::consts::PI,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QaoaConfig {
    /// Cost polynomial coefficients, constant term first.
    pub cost: Vec<f64>,
    pub depth: usize,
    pub cutoff: usize,
    pub squeeze: f64,
    pub optimizer: String,
    pub restarts: usize,
    pub max_iters: u64,
    pub spread: f64,
    pub allow_high_degree: bool,
}

impl Default for QaoaConfig {
    fn default() -> Self {
        QaoaConfig {
            cost: vec![9.0, -6.0, 1.0],
            depth: 5,
            cutoff: 32,
            squeeze: -0.5,
            optimizer: "bfgs".into(),
            restarts: 5,
            max_iters: 200,
            spread: 0.2,
            allow_high_degree: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JchConfig {
    pub sites: usize,
    pub omega_c: f64,
    pub omega_tls: f64,
    pub hop: f64,
    pub coupling: f64,
    pub dt: f64,
    pub steps: usize,
    pub cutoff: usize,
    pub photons: usize,
    /// Steps and cutoff of the density-matrix run.
    pub noisy_steps: usize,
    pub noisy_cutoff: usize,
}

impl Default for JchConfig {
    fn default() -> Self {
        let w = 4.0 * std::f64::consts::PI;
        JchConfig {
            sites: 3,
            omega_c: w,
            omega_tls: w,
            hop: 1.0,
            coupling: 0.5,
            dt: 0.1,
            steps: 50,
            cutoff: 8,
            photons: 2,
            noisy_steps: 10,
            noisy_cutoff: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ShorConfig {
    #[serde(rename = "N")]
    pub n: u64,
    pub slices: usize,
    pub squeeze: f64,
    pub stages: usize,
    pub cutoffs: [usize; 3],
    pub trials: usize,
    /// Envelope of the ideal comb used for the comparison run; unset skips it.
    pub ideal_envelope: Option<f64>,
    /// Base used for the feature row and the structural circuit.
    pub feature_base: u64,
}

impl Default for ShorConfig {
    fn default() -> Self {
        ShorConfig {
            n: 15,
            slices: 2,
            squeeze: 1.202,
            stages: 9,
            cutoffs: [128, 16, 16],
            trials: 5,
            ideal_envelope: Some(0.1),
            feature_base: 7,
        }
    }
}

impl Config {
    pub fn from_toml(s: &str) -> Result<Config> {
        let c: Config = toml::from_str(s).map_err(|e| BenchError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(BenchError::Config(m));
        self.noise.validate().map_err(|e| BenchError::Config(e.to_string()))?;
        if self.jobs == 0 {
            return bad("jobs must be at least 1".into());
        }
        for b in &self.benchmarks {
            if !crate::registry::NAMES.contains(&b.as_str()) {
                return bad(format!("unknown benchmark '{b}' (known: {})", crate::registry::NAMES.join(", ")));
            }
        }
        if self.metrics.grid_points < 2 {
            return bad("metrics.grid_points must be at least 2".into());
        }
        let t = &self.state_transfer;
        if t.qubits == 0 || !(t.delta > 0.0) || t.dv_input >= 1 << t.qubits {
            return bad("state_transfer: need qubits >= 1, delta > 0, dv_input < 2^qubits".into());
        }
        if !(self.cat.alpha > 0.0) {
            return bad("cat.alpha must be positive".into());
        }
        if self.gkp.stages == 0 {
            return bad("gkp.stages must be at least 1".into());
        }
        let q = &self.qft;
        if q.n == 0 || !(q.spacing > 0.0) || q.input >= 1 << q.n {
            return bad("qft: need n >= 1, spacing > 0, input < 2^n".into());
        }
        let v = &self.vqe;
        if v.values.len() != v.weights.len() || v.values.is_empty() {
            return bad("vqe: values and weights must be non-empty and of equal length".into());
        }
        for cut in v.cutoffs {
            if !cut.is_power_of_two() || cut < 2 {
                return bad(format!("vqe: cutoff {cut} must be a power of two >= 2"));
            }
        }
        let bits = 1 + v.cutoffs[0].trailing_zeros() as usize;
        if bits < v.values.len() {
            return bad(format!("vqe: {} items need {} bits, qubit and mode 0 give {bits}", v.values.len(), v.values.len()));
        }
        if self.qaoa.cost.is_empty() {
            return bad("qaoa.cost must have at least one coefficient".into());
        }
        if self.jch.sites < 2 {
            return bad("jch.sites must be at least 2".into());
        }
        let s = &self.shor;
        if s.n < 3 || s.n.is_multiple_of(2) {
            return bad(format!("shor.N = {} must be odd and at least 3", s.n));
        }
        if (s.cutoffs[1] as u64) < s.n {
            return bad(format!("shor: work cutoff {} below N = {}", s.cutoffs[1], s.n));
        }
        for name in [&v.optimizer, &self.qaoa.optimizer] {
            crate::optimize::optimizer(name, 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = Config::default();
        assert_eq!(Config::from_toml(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(Config::from_toml("sed = 3").is_err());
        assert!(Config::from_toml("[cat]\nalpha = 1.0\nbeta = 2").is_err());
    }

    #[test]
    fn partial_document_fills_defaults() {
        let c = Config::from_toml("seed = 3\n[cat]\nalpha = 1.5").unwrap();
        assert_eq!(c.seed, 3);
        assert_eq!(c.cat.alpha, 1.5);
        assert_eq!(c.cat.cutoff, 32);
    }
}
