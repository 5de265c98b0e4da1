use cvdv_core::engine::{register_marginal, run_pure};
use cvdv_core::hilbert::product_state;
use cvdv_core::linalg::{C64, ONE, ZERO};
use cvdv_core::{vacuum_state, Circuit, SystemLayout};
use serde_json::json;

use super::{expect_vector, register_basis};
use crate::config::Config;
use crate::error::Result;
use crate::protocols::cat::{build_cat, build_gkp, cat_lobe_amplitude, even_cat, gkp_target};
use crate::protocols::transfer::{push_cv_to_dv, push_dv_to_cv};
use crate::registry::{to_value, Benchmark, NoisyPlan, Outcome};

pub struct StateTransfer;

fn transfer_circuit(cfg: &Config, to_dv: bool) -> Result<Circuit> {
    let t = &cfg.state_transfer;
    let layout = SystemLayout::new(t.qubits, vec![t.cutoff])?;
    let name = if to_dv { "cv_to_dv" } else { "dv_to_cv" };
    let mut c = Circuit::new(name, layout)
        .param("qubits", t.qubits as f64)
        .param("cutoff", t.cutoff as f64)
        .param("delta", t.delta);
    let qubits: Vec<usize> = (0..t.qubits).collect();
    if to_dv {
        push_cv_to_dv(&mut c, &qubits, 0, t.delta)?;
    } else {
        push_dv_to_cv(&mut c, &qubits, 0, t.delta)?;
    }
    Ok(c)
}

/// DV -> CV then CV -> DV on register value `value`, mode in vacuum; the
/// probability of reading `value` back.
pub fn composed_round_trip(cfg: &Config, value: usize) -> Result<f64> {
    let mut c = transfer_circuit(cfg, false)?;
    c.extend(&transfer_circuit(cfg, true)?)?;
    let qubits: Vec<usize> = (0..cfg.state_transfer.qubits).collect();
    let out = run_pure(&c, &register_basis(&c.layout, &qubits, value)?, None)?;
    let q = 1usize << qubits.len();
    Ok(out.amps.iter().enumerate().filter(|(i, _)| i % q == value).map(|(_, a)| a.norm_sqr()).sum())
}

/// Load `value` into the mode, reset the register to `|0...0>`, read it
/// back, and return the probability of recovering `value`.
pub fn reset_round_trip(cfg: &Config, value: usize) -> Result<f64> {
    let n = cfg.state_transfer.qubits;
    let load = transfer_circuit(cfg, false)?;
    let read = transfer_circuit(cfg, true)?;
    let qubits: Vec<usize> = (0..n).collect();
    let loaded = run_pure(&load, &register_basis(&load.layout, &qubits, value)?, None)?;
    // Resetting the register leaves the mixture of mode branches |φ_j>.
    let q = 1usize << n;
    let mut hit = 0.0;
    for j in 0..q {
        let mut branch = vacuum_state(&read.layout)?;
        for (m, a) in branch.amps.iter_mut().enumerate() {
            *a = if m % q == 0 { loaded.amps[j + m] } else { ZERO };
        }
        if branch.norm() == 0.0 {
            continue;
        }
        let out = run_pure(&read, &branch, None)?;
        hit += out.amps.iter().enumerate().filter(|(i, _)| i % q == value).map(|(_, a)| a.norm_sqr()).sum::<f64>();
    }
    Ok(hit)
}

/// Register histogram, most significant (highest) qubit first.
fn histogram(state: &cvdv_core::PureState, n: usize) -> Vec<f64> {
    let order: Vec<usize> = (0..n).rev().collect();
    register_marginal(state, &order)
}

impl Benchmark for StateTransfer {
    fn name(&self) -> &'static str {
        "state_transfer"
    }

    fn title(&self) -> &'static str {
        "StateTransferCVtoDV"
    }

    fn params(&self, cfg: &Config) -> serde_json::Value {
        to_value(&cfg.state_transfer)
    }

    fn execute(&self, cfg: &Config) -> Result<Outcome> {
        let t = &cfg.state_transfer;
        let fwd = transfer_circuit(cfg, true)?;
        let vac = vacuum_state(&fwd.layout)?;
        let vac_hist = histogram(&run_pure(&fwd, &vac, None)?, t.qubits);

        let mut locals = vec![vec![ONE, ZERO]; t.qubits];
        locals.push(even_cat(t.cat_alpha, t.cutoff));
        let cat_in = product_state(&fwd.layout, &locals)?;
        let cat_hist = histogram(&run_pure(&fwd, &cat_in, None)?, t.qubits);

        let composed = composed_round_trip(cfg, t.dv_input)?;
        let reset = reset_round_trip(cfg, t.dv_input)?;

        let mut out = Outcome::new(fwd, vac);
        out.task = json!({
            "vacuum_histogram": vac_hist,
            "cat_histogram": cat_hist,
            "cat_alpha": t.cat_alpha,
            "round_trip_fidelity": composed,
            "reset_round_trip": reset,
        });
        out.notes.push(
            "round_trip_fidelity composes DV -> CV with CV -> DV; reset_round_trip resets the register in between, \
             so it measures how well a vacuum-width mode holds one cell"
                .into(),
        );
        Ok(out)
    }

    fn noisy(&self, cfg: &Config, _: &Outcome) -> Result<Vec<NoisyPlan>> {
        let t = &cfg.state_transfer;
        let circuit = transfer_circuit(cfg, false)?;
        let qubits: Vec<usize> = (0..t.qubits).collect();
        let initial = register_basis(&circuit.layout, &qubits, t.dv_input)?;
        Ok(vec![NoisyPlan::Run { label: "State Transfer (DV to CV)".into(), circuit, initial, keep: None }])
    }

    fn depth_note(&self) -> Option<&'static str> {
        Some("ASAP layering lets the first H of the decode overlap the last kick; the published count serializes it")
    }
}

pub struct Cat;

/// Fidelity of the mode to the even cat, and the qubit purity.
pub fn cat_scores(alpha: f64, cutoff: usize) -> Result<(f64, f64)> {
    let c = build_cat(alpha, cutoff)?;
    let out = run_pure(&c, &vacuum_state(&c.layout)?, None)?;
    let target = even_cat(cat_lobe_amplitude(alpha), cutoff);
    let fid = expect_vector(&out.mode_reduced(0)?, &target);
    let purity = out.reduced(&[0])?.purity();
    Ok((fid, purity))
}

impl Benchmark for Cat {
    fn name(&self) -> &'static str {
        "cat"
    }

    fn title(&self) -> &'static str {
        "Cat State"
    }

    fn params(&self, cfg: &Config) -> serde_json::Value {
        to_value(&cfg.cat)
    }

    fn execute(&self, cfg: &Config) -> Result<Outcome> {
        let p = &cfg.cat;
        let circuit = build_cat(p.alpha, p.cutoff)?;
        let initial = vacuum_state(&circuit.layout)?;
        let (fid, purity) = cat_scores(p.alpha, p.cutoff)?;
        let sweep = [1.0, 1.5, 2.0, 2.5]
            .iter()
            .map(|&a| cat_scores(a, p.cutoff).map(|(f, _)| json!({"alpha": a, "fidelity": f})))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Outcome::new(circuit, initial);
        out.fidelity = Some(fid);
        out.task = json!({
            "lobe_amplitude": cat_lobe_amplitude(p.alpha),
            "qubit_purity": purity,
            "alpha_sweep": sweep,
        });
        Ok(out)
    }

    fn noisy(&self, _: &Config, o: &Outcome) -> Result<Vec<NoisyPlan>> {
        Ok(vec![NoisyPlan::Run { label: "Cat State".into(), circuit: o.circuit.clone(), initial: o.initial.clone(), keep: None }])
    }
}

pub struct Gkp;

/// Root fidelity `√<t|ρ|t>` of the protocol output to the target comb.
pub fn gkp_fidelity(stages: usize, squeeze: f64, envelope: f64, cutoff: usize) -> Result<f64> {
    let c = build_gkp(stages, squeeze, cutoff)?;
    let out = run_pure(&c, &vacuum_state(&c.layout)?, None)?;
    let target: Vec<C64> = gkp_target(0, squeeze, envelope, cutoff);
    Ok(expect_vector(&out.mode_reduced(0)?, &target).max(0.0).sqrt())
}

impl Benchmark for Gkp {
    fn name(&self) -> &'static str {
        "gkp"
    }

    fn title(&self) -> &'static str {
        "GKP State"
    }

    fn params(&self, cfg: &Config) -> serde_json::Value {
        to_value(&cfg.gkp)
    }

    fn execute(&self, cfg: &Config) -> Result<Outcome> {
        let p = &cfg.gkp;
        let circuit = build_gkp(p.stages, p.squeeze, p.cutoff)?;
        let initial = vacuum_state(&circuit.layout)?;
        let env = |r: f64| p.envelope.unwrap_or(r);
        let fid = gkp_fidelity(p.stages, p.squeeze, env(p.squeeze), p.cutoff)?;
        let sweep = [0.1, 0.222, 0.4]
            .iter()
            .map(|&r| gkp_fidelity(p.stages, r, env(r), p.cutoff).map(|f| json!({"squeeze": r, "fidelity": f})))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Outcome::new(circuit, initial);
        out.fidelity = Some(fid);
        out.task = json!({
            "fidelity_root": fid,
            "fidelity_squared": fid * fid,
            "rounds": p.stages.saturating_sub(1),
            "squeeze_sweep": sweep,
        });
        out.notes.push("fidelity is the root convention sqrt(<t|rho|t>)".into());
        Ok(out)
    }

    fn noisy(&self, _: &Config, o: &Outcome) -> Result<Vec<NoisyPlan>> {
        Ok(vec![NoisyPlan::Run { label: "GKP State".into(), circuit: o.circuit.clone(), initial: o.initial.clone(), keep: None }])
    }
}
