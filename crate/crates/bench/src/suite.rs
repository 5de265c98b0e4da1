//! Running benchmarks: metric tracking, noisy comparisons, suite assembly.

use cvdv_core::engine::{run_density, run_pure};
use cvdv_core::hilbert::pure_mixed_fidelity;
use cvdv_core::metrics::{normalize_suite, track_maxima, FeatureVector};
use cvdv_core::noise::uhlmann_fidelity;
use cvdv_core::{Circuit, MixedState, NoiseModel, PureState};
use rayon::prelude::*;

use crate::config::Config;
use crate::error::Result;
use crate::registry::{registry, Benchmark, NoisyPlan};
use crate::report::{BenchmarkReport, Failure, NoisyResult, NoisyStatus, SuiteResult};

/// Fidelity between the ideal output and the noisy density-matrix output,
/// on the `keep` wires if given.
pub fn noisy_fidelity(circuit: &Circuit, initial: &PureState, noise: &NoiseModel, keep: Option<&[usize]>) -> Result<f64> {
    let ideal = run_pure(circuit, initial, None)?;
    let rho = run_density(circuit, &MixedState::from_pure(initial)?, Some(noise), None)?;
    Ok(match keep {
        None => pure_mixed_fidelity(&ideal, &rho)?,
        Some(k) => uhlmann_fidelity(&ideal.reduced(k)?.matrix(), &rho.reduced(k)?.matrix())?,
    })
}

fn run_plan(plan: NoisyPlan, noise: &NoiseModel) -> NoisyResult {
    match plan {
        NoisyPlan::Run { label, circuit, initial, keep } => {
            let duration = Some(noise.circuit_duration(&circuit));
            match noisy_fidelity(&circuit, &initial, noise, keep.as_deref()) {
                Ok(f) => NoisyResult { label, status: NoisyStatus::Ok, duration_s: duration, fidelity: Some(f), reason: None },
                Err(e) => NoisyResult {
                    label,
                    status: NoisyStatus::Failed,
                    duration_s: duration,
                    fidelity: None,
                    reason: Some(e.to_string()),
                },
            }
        }
        NoisyPlan::NotDeskScale { label, reason } => {
            NoisyResult { label, status: NoisyStatus::NotDeskScale, duration_s: None, fidelity: None, reason: Some(reason) }
        }
        NoisyPlan::Skipped { label, reason } => {
            NoisyResult { label, status: NoisyStatus::Skipped, duration_s: None, fidelity: None, reason: Some(reason) }
        }
    }
}

/// Execute one benchmark, track its metrics and, if `noisy`, run its
/// density-matrix comparisons.
pub fn run_benchmark(b: &dyn Benchmark, cfg: &Config, noisy: bool) -> Result<BenchmarkReport> {
    let out = b.execute(cfg)?;
    let max_cut = out.circuit.layout.cutoffs.iter().copied().max().unwrap_or(1);
    let opts = cfg.metrics.options_for(out.circuit.ops.len(), max_cut);
    let raw = track_maxima(&out.circuit, &out.initial, &opts)?;
    let features = FeatureVector::new(b.title(), out.structure.as_ref().unwrap_or(&out.circuit), raw);
    let noisy = if noisy {
        b.noisy(cfg, &out)?.into_iter().map(|p| run_plan(p, &cfg.noise)).collect()
    } else {
        Vec::new()
    };
    Ok(BenchmarkReport {
        name: b.name().into(),
        title: b.title().into(),
        seed: cfg.seed,
        params: b.params(cfg),
        features,
        metric_options: opts,
        depth_note: b.depth_note().map(String::from),
        fidelity: out.fidelity,
        noisy,
        task: out.task,
        notes: out.notes,
    })
}

/// Selected benchmarks (all when the config lists none), in registry order.
pub fn selected(cfg: &Config) -> Vec<Box<dyn Benchmark>> {
    registry().into_iter().filter(|b| cfg.benchmarks.is_empty() || cfg.benchmarks.iter().any(|n| n == b.name())).collect()
}

/// Run the selection on `cfg.jobs` threads, then normalize the metrics
/// over the rows that succeeded. Failures do not stop the suite.
pub fn run_suite(cfg: &Config) -> Result<SuiteResult> {
    let benches = selected(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| crate::error::BenchError::Config(format!("thread pool: {e}")))?;
    let results: Vec<(usize, Result<BenchmarkReport>)> =
        pool.install(|| benches.par_iter().enumerate().map(|(i, b)| (i, run_benchmark(b.as_ref(), cfg, true))).collect());
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for (i, r) in results {
        match r {
            Ok(rep) => reports.push(rep),
            Err(e) => failures.push(Failure { name: benches[i].name().into(), title: benches[i].title().into(), error: e.to_string() }),
        }
    }
    let mut notes = Vec::new();
    if !reports.is_empty() {
        let mut feats: Vec<FeatureVector> = reports.iter().map(|r| r.features.clone()).collect();
        notes = normalize_suite(&mut feats)?;
        for (r, f) in reports.iter_mut().zip(feats) {
            r.features = f;
        }
    }
    Ok(SuiteResult { reports, failures, notes })
}
