use cvdv_core::engine::{linspace, quadrature_distribution, register_marginal, run_pure, Quadrature};
use cvdv_core::gates::position;
use cvdv_core::{vacuum_state, PureState};
use serde_json::json;

use super::register_basis;
use crate::config::Config;
use crate::error::{BenchError, Result};
use crate::optimize::{multistart, optimizer, GradientFn, OptResult};
use crate::protocols::qaoa::{build_qaoa, CostPoly, QaoaParams};
use crate::protocols::qft::{build_qft, dft_column, register_overlap, QftParams};
use crate::protocols::vqe::{build_ansatz, expectation, expectation_with_gradient, joint_distribution, outcome_cost, Knapsack, VqeLayout, PARAMS_PER_LAYER};
use crate::registry::{to_value, Benchmark, NoisyPlan, Outcome};

pub struct Qft;

pub fn qft_params(cfg: &Config, ancilla: usize) -> QftParams {
    let q = &cfg.qft;
    QftParams {
        n: q.n,
        ancilla,
        append: q.append,
        cutoff: q.cutoff,
        spacing: q.spacing,
        pre_shift: q.pre_shift,
        post_shift: q.post_shift,
    }
}

/// Run the routed transform on basis input `input`; returns the output state,
/// the data-register fidelity to the exact DFT column, and the data
/// histogram (most significant first).
pub fn qft_run(p: &QftParams, input: usize) -> Result<(PureState, f64, Vec<f64>)> {
    let (circ, slots) = build_qft(p)?;
    let initial = register_basis(&circ.layout, &slots.data, input)?;
    let out = run_pure(&circ, &initial, None)?;
    let msb_first: Vec<usize> = slots.data.iter().rev().copied().collect();
    let rho = out.reduced(&slots.data)?.matrix();
    let fid = register_overlap(&rho, &msb_first, &dft_column(p.n, input));
    let hist = register_marginal(&out, &msb_first);
    Ok((out, fid, hist))
}

impl Benchmark for Qft {
    fn name(&self) -> &'static str {
        "qft"
    }

    fn title(&self) -> &'static str {
        "QFT Circuit"
    }

    fn params(&self, cfg: &Config) -> serde_json::Value {
        to_value(&cfg.qft)
    }

    fn execute(&self, cfg: &Config) -> Result<Outcome> {
        let q = &cfg.qft;
        let p = qft_params(cfg, q.ancilla);
        let (circ, slots) = build_qft(&p)?;
        let initial = register_basis(&circ.layout, &slots.data, q.input)?;
        let (_, fid, hist) = qft_run(&p, q.input)?;
        let sweep = (0..=2)
            .map(|a| qft_run(&qft_params(cfg, a), q.input).map(|r| json!({"ancilla": a, "fidelity": r.1})))
            .collect::<Result<Vec<_>>>()?;
        let target: Vec<f64> = dft_column(q.n, q.input).iter().map(|z| z.norm_sqr()).collect();
        let classical: f64 = hist.iter().zip(&target).map(|(a, b)| (a * b).sqrt()).sum::<f64>().powi(2);
        let mut out = Outcome::new(circ, initial);
        out.fidelity = Some(fid);
        out.task = json!({
            "data_histogram": hist,
            "distribution_fidelity": classical,
            "ancilla_sweep": sweep,
        });
        out.notes.push("fidelity is <v|rho_data|v> against the exact DFT column; the histogram match alone is distribution_fidelity".into());
        Ok(out)
    }

    fn noisy(&self, _: &Config, o: &Outcome) -> Result<Vec<NoisyPlan>> {
        let keep: Vec<usize> = (0..o.circuit.layout.qubits).collect();
        Ok(vec![NoisyPlan::Run {
            label: "QFT Circuit".into(),
            circuit: o.circuit.clone(),
            initial: o.initial.clone(),
            keep: Some(keep),
        }])
    }

    fn depth_note(&self) -> Option<&'static str> {
        Some("the ancilla H shares the top wire with the first bit-reversal swap, which adds one layer over the published count")
    }
}

fn optimize(
    name: &str,
    max_iters: u64,
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    grad: Option<GradientFn>,
    x0: &[f64],
    restarts: usize,
    spread: f64,
    seed: u64,
) -> Result<(OptResult, Vec<OptResult>)> {
    let opt = optimizer(name, max_iters)?;
    multistart(opt.as_ref(), f, grad, x0, restarts, spread, seed)
}

pub struct Vqe;

pub fn knapsack(cfg: &Config) -> Knapsack {
    let v = &cfg.vqe;
    Knapsack { values: v.values.clone(), weights: v.weights.clone(), capacity: v.capacity }
}

impl Benchmark for Vqe {
    fn name(&self) -> &'static str {
        "vqe"
    }

    fn title(&self) -> &'static str {
        "CV-DV VQE"
    }

    fn params(&self, cfg: &Config) -> serde_json::Value {
        to_value(&cfg.vqe)
    }

    fn execute(&self, cfg: &Config) -> Result<Outcome> {
        let v = &cfg.vqe;
        let k = knapsack(cfg);
        let penalty = v.penalty.unwrap_or_else(|| k.default_penalty());
        let failed = std::sync::Mutex::new(None);
        let f = |x: &[f64]| match expectation(&k, v.depth, v.cutoffs, x, penalty) {
            Ok(e) => e,
            Err(e) => {
                failed.lock().unwrap().get_or_insert(e);
                f64::INFINITY
            }
        };
        let g = |x: &[f64]| match expectation_with_gradient(&k, v.depth, v.cutoffs, x, penalty) {
            Ok((_, g)) => g,
            Err(e) => {
                failed.lock().unwrap().get_or_insert(e);
                vec![0.0; x.len()]
            }
        };
        let x0 = vec![0.0; v.depth * PARAMS_PER_LAYER];
        let initial_objective = f(&x0);
        let (best, runs) = optimize(&v.optimizer, v.max_iters, &f, Some(&g), &x0, v.restarts, v.spread, cfg.seed)?;
        if let Some(e) = failed.into_inner().unwrap() {
            return Err(e.into());
        }
        let circuit = build_ansatz(v.depth, v.cutoffs, &best.x)?;
        let initial = vacuum_state(&circuit.layout)?;
        let out = run_pure(&circuit, &initial, None)?;
        let lay = VqeLayout { cutoffs: v.cutoffs };
        let mut dist = joint_distribution(&out);
        dist.sort_by(|a, b| b.1.total_cmp(&a.1));
        let ((q, n0, n1), p_top) = dist[0];
        let bits = lay.decode(q, n0, n1);
        let items = &bits[..k.values.len()];
        let (opt_items, opt_value, opt_weight) = k.brute_force();
        let top: Vec<_> = dist
            .iter()
            .take(5)
            .map(|&((q, a, b), p)| {
                json!({"bits": bit_string(&lay.decode(q, a, b)), "probability": p, "cost": outcome_cost(&k, &lay, q, a, b, penalty)})
            })
            .collect();
        let mut o = Outcome::new(circuit, initial);
        o.task = json!({
            "penalty": penalty,
            "initial_objective": initial_objective,
            "objective": best.value,
            "restart_objectives": runs.iter().map(|r| r.value).collect::<Vec<_>>(),
            "iterations": best.iterations,
            "evaluations": runs.iter().map(|r| r.evaluations).sum::<u64>(),
            "decoded_bits": bit_string(&bits),
            "decoded_probability": p_top,
            "solution": items,
            "value": k.value(items),
            "weight": k.weight(items),
            "feasible": k.weight(items) <= k.capacity,
            "exhaustive_optimum": {"solution": opt_items, "value": opt_value, "weight": opt_weight},
            "matches_exhaustive": items == opt_items.as_slice(),
            "top_outcomes": top,
        });
        Ok(o)
    }

    fn noisy(&self, _: &Config, o: &Outcome) -> Result<Vec<NoisyPlan>> {
        Ok(vec![NoisyPlan::Run { label: "CV-DV VQE".into(), circuit: o.circuit.clone(), initial: o.initial.clone(), keep: None }])
    }
}

fn bit_string(bits: &[u8]) -> String {
    bits.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect()
}

pub struct Qaoa;

pub fn qaoa_params(cfg: &Config) -> QaoaParams {
    let q = &cfg.qaoa;
    QaoaParams {
        cost: CostPoly { coeffs: q.cost.clone() },
        cutoff: q.cutoff,
        squeeze: q.squeeze,
        allow_high_degree: q.allow_high_degree,
    }
}

/// Cost expectation and position mean of the circuit output.
pub fn qaoa_scores(p: &QaoaParams, angles: &[f64]) -> Result<(f64, f64, PureState)> {
    let c = build_qaoa(p, angles)?;
    let out = run_pure(&c, &vacuum_state(&c.layout)?, None)?;
    let cost = out.expect_local(&p.cost.operator(p.cutoff), &[0])?.re;
    let mean = out.expect_local(&position(p.cutoff), &[0])?.re;
    Ok((cost, mean, out))
}

/// Optimized angles for `p` at the given depth.
pub fn optimize_qaoa(cfg: &Config, p: &QaoaParams, depth: usize) -> Result<(OptResult, Vec<OptResult>)> {
    let q = &cfg.qaoa;
    build_qaoa(p, &[0.0, 0.0])?;
    let f = |x: &[f64]| qaoa_scores(p, x).map(|s| s.0).unwrap_or(f64::INFINITY);
    let x0: Vec<f64> = (0..depth).flat_map(|_| [0.1, 0.5]).collect();
    optimize(&q.optimizer, q.max_iters, &f, None, &x0, q.restarts, q.spread, cfg.seed)
}

impl Benchmark for Qaoa {
    fn name(&self) -> &'static str {
        "qaoa"
    }

    fn title(&self) -> &'static str {
        "CV QAOA"
    }

    fn params(&self, cfg: &Config) -> serde_json::Value {
        to_value(&cfg.qaoa)
    }

    fn execute(&self, cfg: &Config) -> Result<Outcome> {
        let q = &cfg.qaoa;
        let p = qaoa_params(cfg);
        let (best, runs) = optimize_qaoa(cfg, &p, q.depth)?;
        let (cost, mean, out) = qaoa_scores(&p, &best.x)?;
        let circuit = build_qaoa(&p, &best.x)?;
        let initial = vacuum_state(&circuit.layout)?;
        let x2 = out.expect_local(&(position(q.cutoff) * position(q.cutoff)), &[0])?.re;
        let grid = linspace(-8.0, 8.0, 161);
        let dist = quadrature_distribution(&out.mode_reduced(0)?, Quadrature::X, &grid)?;
        let argmax = dist.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| grid[i]).unwrap_or(f64::NAN);
        if !cost.is_finite() {
            return Err(BenchError::task("qaoa", "objective is not finite"));
        }
        let mut o = Outcome::new(circuit, initial);
        o.task = json!({
            "angles": best.x,
            "objective": cost,
            "restart_objectives": runs.iter().map(|r| r.value).collect::<Vec<_>>(),
            "iterations": best.iterations,
            "mean_x": mean,
            "std_x": (x2 - mean * mean).max(0.0).sqrt(),
            "mode_x": argmax,
            "grid": grid,
            "distribution": dist,
        });
        Ok(o)
    }

    fn noisy(&self, _: &Config, _: &Outcome) -> Result<Vec<NoisyPlan>> {
        Ok(vec![NoisyPlan::Skipped {
            label: "CV QAOA".into(),
            reason: "cost and mixer are custom unitaries with no native-gate durations".into(),
        }])
    }
}
