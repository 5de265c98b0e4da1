use std::collections::BTreeMap;

use cvdv_core::engine::{mean_photon, qubit_marginal, run_pure};
use cvdv_core::PureState;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::Config;
use crate::error::{BenchError, Result};
use crate::protocols::jch::{build_jch, initial_state, JchParams};
use crate::protocols::shor::{
    build_shor, chance_success, factors_from_period, gcd, initial_state as shor_initial, multiplicative_order, peak_mass,
    period_candidates, sample_fractions, ShorParams,
};
use crate::registry::{to_value, Benchmark, NoisyPlan, Outcome};

pub struct Jch;

pub fn jch_params(cfg: &Config) -> JchParams {
    let j = &cfg.jch;
    JchParams {
        sites: j.sites,
        omega_c: j.omega_c,
        omega_tls: j.omega_tls,
        hop: j.hop,
        coupling: j.coupling,
        dt: j.dt,
        steps: j.steps,
        cutoff: j.cutoff,
    }
}

/// Per-step photon numbers per mode (row 0 is the initial state) and the
/// total qubit excitation per step.
pub fn jch_traces(p: &JchParams, photons: usize) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let circ = build_jch(p)?;
    let s0 = initial_state(p, photons)?;
    let per_step = circ.ops.len() / p.steps.max(1);
    let sample = |s: &PureState| -> (Vec<f64>, f64) {
        let n = (0..p.sites).map(|m| mean_photon(s, m).unwrap_or(f64::NAN)).collect();
        let tls = qubit_marginal(s).iter().enumerate().map(|(k, pr)| pr * k.count_ones() as f64).sum();
        (n, tls)
    };
    let (n0, t0) = sample(&s0);
    let (mut photons_out, mut tls_out) = (vec![n0], vec![t0]);
    let mut hook = |i: usize, s: &PureState| {
        if (i + 1).is_multiple_of(per_step) {
            let (n, t) = sample(s);
            photons_out.push(n);
            tls_out.push(t);
        }
    };
    run_pure(&circ, &s0, Some(&mut hook))?;
    Ok((photons_out, tls_out))
}

impl Benchmark for Jch {
    fn name(&self) -> &'static str {
        "jch"
    }

    fn title(&self) -> &'static str {
        "JCH N=3 (per Trotter step)"
    }

    fn params(&self, cfg: &Config) -> serde_json::Value {
        to_value(&cfg.jch)
    }

    fn execute(&self, cfg: &Config) -> Result<Outcome> {
        let p = jch_params(cfg);
        let photons = cfg.jch.photons;
        let circuit = build_jch(&p)?;
        let initial = initial_state(&p, photons)?;
        let structure = build_jch(&JchParams { steps: 1, ..p.clone() })?;
        let (traces, tls) = jch_traces(&p, photons)?;
        let total: Vec<f64> = traces.iter().map(|r| r.iter().sum()).collect();
        let dev = |v: &[f64]| v.iter().map(|t| (t - photons as f64).abs()).fold(0.0, f64::max);
        let excitations: Vec<f64> = total.iter().zip(&tls).map(|(a, b)| a + b).collect();
        let col_max = |m: usize| traces.iter().map(|r| r[m]).fold(0.0, f64::max);
        let edge_max = col_max(0).max(col_max(p.sites - 1));
        let middle_max = (1..p.sites - 1).map(col_max).fold(0.0, f64::max);
        let mut o = Outcome::new(circuit, initial);
        o.structure = Some(structure);
        o.task = json!({
            "photon_traces": traces,
            "total_photons": total,
            "tls_excitation": tls,
            "max_photon_deviation": dev(&total),
            "max_excitation_deviation": dev(&excitations),
            "edge_max": edge_max,
            "middle_max": middle_max,
        });
        if dev(&total) > 0.02 {
            o.notes.push(format!(
                "photon number is not conserved: up to {:.3} photons sit in the two-level systems; photons + excitations drift by {:.1e}",
                tls.iter().fold(0.0f64, |a, &b| a.max(b)),
                dev(&excitations)
            ));
        }
        Ok(o)
    }

    fn noisy(&self, cfg: &Config, _: &Outcome) -> Result<Vec<NoisyPlan>> {
        let j = &cfg.jch;
        let p = JchParams { steps: j.noisy_steps, cutoff: j.noisy_cutoff, ..jch_params(cfg) };
        let circuit = build_jch(&p)?;
        let initial = initial_state(&p, j.photons.min(j.noisy_cutoff - 1))?;
        Ok(vec![
            NoisyPlan::Run { label: format!("JCH N={} ({} Trotter steps)", j.sites, j.noisy_steps), circuit, initial, keep: None },
            NoisyPlan::NotDeskScale {
                label: format!("JCH N={} ({} Trotter steps)", j.sites, j.steps),
                reason: format!("density matrix of dimension {} at cutoff {}", 2usize.pow(j.sites as u32) * j.cutoff.pow(j.sites as u32), j.cutoff),
            },
        ])
    }
}

pub struct Shor;

pub fn shor_params(cfg: &Config, a: u64) -> ShorParams {
    let s = &cfg.shor;
    ShorParams { a, n: s.n, slices: s.slices, squeeze: s.squeeze, stages: s.stages, cutoffs: s.cutoffs, ideal_comb: None }
}

/// One seeded factoring attempt per trial; bases drawn uniformly from the
/// units mod `N`, one momentum shot each.
pub fn shor_trials(cfg: &Config) -> Result<serde_json::Value> {
    let s = &cfg.shor;
    let units: Vec<u64> = (2..s.n - 1).filter(|&a| gcd(a, s.n) == 1).collect();
    if units.is_empty() {
        return Err(BenchError::task("shor", format!("no base coprime to {}", s.n)));
    }
    let mut cache: BTreeMap<u64, PureState> = BTreeMap::new();
    let mut trials = Vec::new();
    let mut successes = 0;
    for t in 0..s.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(t as u64);
        let a = units[rng.random_range(0..units.len())];
        if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(a) {
            let p = shor_params(cfg, a);
            let c = build_shor(&p)?;
            e.insert(run_pure(&c, &shor_initial(&p)?, None)?);
        }
        let frac = sample_fractions(&cache[&a], 1, rng.random::<u64>())?[0];
        let periods = period_candidates(a, s.n, frac);
        let factors = periods.iter().find_map(|&r| factors_from_period(a, s.n, r));
        successes += factors.is_some() as usize;
        trials.push(json!({
            "a": a,
            "fraction": frac,
            "periods": periods,
            "factors": factors.map(|(p, q)| vec![p, q]),
        }));
    }
    let chance: BTreeMap<String, f64> = cache.keys().map(|&a| (a.to_string(), chance_success(a, s.n))).collect();
    Ok(json!({"trials": trials, "successes": successes, "chance_success": chance}))
}

impl Benchmark for Shor {
    fn name(&self) -> &'static str {
        "shor"
    }

    fn title(&self) -> &'static str {
        "Shor's Circuit"
    }

    fn params(&self, cfg: &Config) -> serde_json::Value {
        to_value(&cfg.shor)
    }

    fn execute(&self, cfg: &Config) -> Result<Outcome> {
        let s = &cfg.shor;
        let a = s.feature_base;
        let r = multiplicative_order(a, s.n)
            .ok_or_else(|| BenchError::task("shor", format!("feature_base {a} is not coprime to {}", s.n)))?;
        let p = shor_params(cfg, a);
        let circuit = build_shor(&p)?;
        let initial = shor_initial(&p)?;
        let out = run_pure(&circuit, &initial, None)?;
        let mass = peak_mass(&out, r)?;
        let ideal_mass = match s.ideal_envelope {
            Some(env) => {
                let pi = ShorParams { ideal_comb: Some(env), ..p.clone() };
                let c = build_shor(&pi)?;
                Some(peak_mass(&run_pure(&c, &shor_initial(&pi)?, None)?, r)?)
            }
            None => None,
        };
        let mut task = shor_trials(cfg)?;
        task["feature_base"] = json!(a);
        task["period"] = json!(r);
        task["peak_mass"] = json!(mass);
        task["peak_mass_ideal_comb"] = json!(ideal_mass);
        task["exact_period_factors"] = json!(factors_from_period(a, s.n, r));
        let mut o = Outcome::new(circuit, initial);
        o.task = task;
        o.notes.push("peak_mass is the probability of reading within a quarter cell of some s/r; 0.5 carries no period information".into());
        Ok(o)
    }

    fn noisy(&self, cfg: &Config, o: &Outcome) -> Result<Vec<NoisyPlan>> {
        Ok(vec![NoisyPlan::NotDeskScale {
            label: "Shor's Circuit".into(),
            reason: format!("density matrix of dimension {} (cutoffs {:?})", o.circuit.layout.dim(), cfg.shor.cutoffs),
        }])
    }
}
