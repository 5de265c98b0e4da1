//! Acceptance report: one PASS/FAIL line per criterion. Only the property
//! suite (criterion 10) is asserted; the others report what the current
//! build reaches, and the test panics only when a criterion cannot be
//! evaluated at all.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use cvdv_bench::benchmarks::{cat_scores, gkp_fidelity, qft_params, qft_run};
use cvdv_bench::config::Config;
use cvdv_bench::protocols::cat::{build_cat, build_gkp};
use cvdv_bench::protocols::jch::{build_jch, dense_hamiltonian, initial_state as jch_initial, JchParams};
use cvdv_bench::protocols::qaoa::{build_qaoa, CostPoly, QaoaParams};
use cvdv_bench::protocols::qft::{build_qft, QftParams};
use cvdv_bench::protocols::shor::{build_shor, initial_state as shor_initial, ShorParams};
use cvdv_bench::protocols::transfer::{push_cv_to_dv, push_dv_to_cv};
use cvdv_bench::protocols::vqe::{build_ansatz, PARAMS_PER_LAYER};
use cvdv_bench::registry;
use cvdv_bench::report::{BenchmarkReport, NoisyStatus};
use cvdv_bench::suite::{noisy_fidelity, run_benchmark};
use cvdv_core::engine::{linspace, op_matrix};
use cvdv_core::hilbert::{overlap_fidelity, product_state};
use cvdv_core::linalg::{c, unitarity_error, CVector, C64};
use cvdv_core::metrics::{normalize_suite, wigner, wigner_negativity, GridSpec};
use cvdv_core::noise::{cf_fidelity, characteristic_function, kraus_completeness, photon_loss_kraus, qubit_decay_kraus, uhlmann_fidelity};
use cvdv_core::oracle::{dense_hamiltonian_exp, dense_run};
use cvdv_core::{fock_state, run_pure, vacuum_state, Circuit, GateKind, MixedState, PureState, SystemLayout, Wire};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn num(v: &serde_json::Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("task field '{key}' missing"))
}

/// Published counts: qubits, qumodes, qubit gates, qumode gates, hybrid
/// gates, depth; then normalized energy, negativity, truncation.
const PUBLISHED: &[(&str, [f64; 9])] = &[
    ("state_transfer", [4.0, 1.0, 9.0, 0.0, 8.0, 12.0, 0.12, 0.14, 0.24]),
    ("cat", [1.0, 1.0, 6.0, 0.0, 2.0, 8.0, 0.15, 0.09, 0.19]),
    ("gkp", [1.0, 1.0, 48.0, 1.0, 16.0, 64.0, 0.23, 0.30, 0.90]),
    ("qft", [5.0, 1.0, 23.0, 3.0, 20.0, 29.0, 0.19, 0.19, 0.58]),
    ("vqe", [1.0, 2.0, 10.0, 0.0, 10.0, 20.0, 0.09, 0.13, 1.00]),
    ("qaoa", [0.0, 1.0, 0.0, 11.0, 0.0, 11.0, 0.28, 1.00, 0.26]),
    ("jch", [3.0, 3.0, 3.0, 5.0, 3.0, 4.0, 0.08, 0.05, 0.00]),
    ("shor", [1.0, 3.0, 128.0, 32.0, 80.0, 209.0, 1.00, 0.59, 0.06]),
];

/// Published noisy fidelities at the frozen duration table.
const NOISY: &[(&str, f64)] = &[
    ("Cat State", 0.99),
    ("GKP State", 0.97),
    ("QFT Circuit", 0.99),
    ("CV-DV VQE", 0.91),
    ("JCH N=3 (10 Trotter steps)", 0.92),
    ("State Transfer (DV to CV)", 0.99),
];

fn criterion_1() -> Verdict {
    let (f, t) = timed(|| gkp_fidelity(9, 0.222, 0.222, 64).expect("gkp"));
    verdict((f - 0.66).abs() <= 0.03 && t.as_secs_f64() < 60.0, format!("fidelity {f:.4} (target 0.66 ± 0.03) in {t:.1?}"))
}

fn criterion_2(cfg: &Config) -> Verdict {
    let ((_, f, _), t) = timed(|| qft_run(&qft_params(cfg, 1), 0).expect("qft"));
    verdict((f - 0.94).abs() <= 0.02 && t.as_secs_f64() < 60.0, format!("data-register fidelity {f:.4} (target 0.94 ± 0.02) in {t:.1?}"))
}

fn criterion_3(r: &BenchmarkReport, t: Duration) -> Verdict {
    let task = &r.task;
    let solution: Vec<u64> = task["solution"].as_array().expect("solution").iter().map(|v| v.as_u64().unwrap()).collect();
    let ok = task["matches_exhaustive"].as_bool() == Some(true)
        && solution == [0, 1, 1, 1]
        && num(task, "value") == 19.0
        && num(task, "weight") == 6.0
        && t.as_secs_f64() < 600.0;
    verdict(
        ok,
        format!(
            "decoded {:?} value {} weight {} (bits {}, p = {:.3}) in {t:.1?}",
            solution,
            num(task, "value"),
            num(task, "weight"),
            task["decoded_bits"].as_str().unwrap_or("?"),
            num(task, "decoded_probability")
        ),
    )
}

fn criterion_4(r: &BenchmarkReport, t: Duration) -> Verdict {
    let m = num(&r.task, "mean_x");
    verdict((m - 3.0).abs() < 0.3 && t.as_secs_f64() < 300.0, format!("<x> = {m:.4} in {t:.1?}"))
}

fn criterion_5(r: &BenchmarkReport, t: Duration) -> Verdict {
    let dev = num(&r.task, "max_photon_deviation");
    let edge = num(&r.task, "edge_max");
    let mid = num(&r.task, "middle_max");
    let ok = dev <= 0.02 && edge >= 1.8 && mid <= 1.2 && t.as_secs_f64() < 300.0;
    verdict(ok, format!("photon deviation {dev:.3}, edge max {edge:.3}, middle max {mid:.3} in {t:.1?}"))
}

fn criterion_6(r: &BenchmarkReport) -> Verdict {
    let successes = r.task["successes"].as_u64().expect("successes");
    let exact = &r.task["exact_period_factors"];
    let exact_ok = *exact == serde_json::json!([3, 5]);
    verdict(successes >= 1 && exact_ok, format!("{successes}/5 trials recovered a factor; exact period gives {exact}"))
}

fn criterion_7(reports: &[BenchmarkReport]) -> Verdict {
    let mut bad = Vec::new();
    for r in reports {
        let want = published(&r.name);
        let got = r.features.row();
        if got[..5] != want[..5] {
            bad.push(format!("{} counts {:?} vs {:?}", r.name, &got[..5], &want[..5]));
        }
        if got[5] != want[5] && r.depth_note.is_none() {
            bad.push(format!("{} depth {} vs {} without a note", r.name, got[5], want[5]));
        }
    }
    let noted: Vec<String> = reports
        .iter()
        .filter(|r| r.depth_note.is_some() && r.features.row()[5] != published(&r.name)[5])
        .map(|r| format!("{} depth {} (noted)", r.name, r.features.row()[5]))
        .collect();
    let detail = if bad.is_empty() { noted.join(", ") } else { format!("{}; {}", bad.join("; "), noted.join(", ")) };
    verdict(bad.is_empty(), detail)
}

fn criterion_8(reports: &[BenchmarkReport]) -> Verdict {
    let mut feats: Vec<_> = reports.iter().map(|r| r.features.clone()).collect();
    normalize_suite(&mut feats).expect("normalize");
    let mut bad = Vec::new();
    for (r, f) in reports.iter().zip(&feats) {
        let n = f.normalized.as_ref().unwrap();
        let want = published(&r.name);
        for (label, got, w) in [("energy", n.energy, want[6]), ("negativity", n.negativity, want[7]), ("truncation", n.truncation, want[8])] {
            let tol = if w == 1.0 { 1e-12 } else { 0.1 };
            if (got - w).abs() > tol {
                bad.push(format!("{} {label} {got:.2} vs {w:.2}", r.name));
            }
        }
    }
    verdict(bad.is_empty(), if bad.is_empty() { "all normalized metrics within tolerance".into() } else { bad.join("; ") })
}

fn criterion_9(cfg: &Config, reports: &[BenchmarkReport]) -> Verdict {
    let rows: BTreeMap<&str, Option<f64>> = reports
        .iter()
        .flat_map(|r| &r.noisy)
        .filter(|n| n.status == NoisyStatus::Ok)
        .map(|n| (n.label.as_str(), n.fidelity))
        .collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for &(label, want) in NOISY {
        match rows.get(label).copied().flatten() {
            Some(f) => {
                ok &= (f - want).abs() <= 0.03;
                parts.push(format!("{label} {f:.3}/{want}"));
            }
            None => {
                ok = false;
                parts.push(format!("{label} missing"));
            }
        }
    }
    let cat = build_cat(cfg.cat.alpha, cfg.cat.cutoff).unwrap();
    let gkp = build_gkp(cfg.gkp.stages, cfg.gkp.squeeze, cfg.gkp.cutoff).unwrap();
    for (name, circ) in [("cat", cat), ("gkp", gkp)] {
        let init = vacuum_state(&circ.layout).unwrap();
        let k = cfg.noise.kappa;
        let f: Vec<f64> =
            [k, 2.0 * k, 4.0 * k].iter().map(|&kk| noisy_fidelity(&circ, &init, &cfg.noise.with_kappa(kk), None).unwrap()).collect();
        let dec = f.windows(2).all(|w| w[1] < w[0]);
        ok &= dec;
        parts.push(format!("{name} κ-doubling {:.4} > {:.4} > {:.4}: {}", f[0], f[1], f[2], if dec { "yes" } else { "no" }));
    }
    verdict(ok, parts.join(", "))
}

fn published(name: &str) -> [f64; 9] {
    PUBLISHED.iter().find(|(n, _)| *n == name).unwrap_or_else(|| panic!("no published row for {name}")).1
}

fn jch(sites: usize, cutoff: usize, dt: f64, steps: usize) -> JchParams {
    let w = 4.0 * std::f64::consts::PI;
    JchParams { sites, omega_c: w, omega_tls: w, hop: 1.0, coupling: 0.5, dt, steps, cutoff }
}

fn transfer(to_dv: bool) -> Circuit {
    let mut circ = Circuit::new("t", SystemLayout::new(4, vec![32]).unwrap());
    let q: Vec<usize> = (0..4).collect();
    if to_dv {
        push_cv_to_dv(&mut circ, &q, 0, 0.39).unwrap();
    } else {
        push_dv_to_cv(&mut circ, &q, 0, 0.39).unwrap();
    }
    circ
}

fn random_params(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Every benchmark at a total dimension of at most 1024.
fn reduced_benchmarks() -> Vec<(&'static str, Circuit, PureState)> {
    let qft = QftParams { n: 2, ancilla: 1, append: 2, cutoff: 16, spacing: 0.29, pre_shift: 0.0, post_shift: 0.0 };
    let qaoa = QaoaParams { cost: CostPoly::shifted_square(3.0), cutoff: 32, squeeze: -0.5, allow_high_degree: false };
    let shor = ShorParams { a: 7, n: 15, slices: 2, squeeze: 1.202, stages: 9, cutoffs: [8, 16, 2], ideal_comb: None };
    let j = jch(3, 4, 0.1, 3);
    let vac = |c: Circuit| {
        let v = vacuum_state(&c.layout).unwrap();
        (c, v)
    };
    let mut out = Vec::new();
    for (name, (circ, init)) in [
        ("transfer cv->dv", vac(transfer(true))),
        ("transfer dv->cv", vac(transfer(false))),
        ("cat", vac(build_cat(2.0, 32).unwrap())),
        ("gkp", vac(build_gkp(9, 0.222, 64).unwrap())),
        ("qft", vac(build_qft(&qft).unwrap().0)),
        ("vqe", vac(build_ansatz(5, [8, 8], &random_params(5 * PARAMS_PER_LAYER, 11)).unwrap())),
        ("qaoa", vac(build_qaoa(&qaoa, &random_params(10, 12)).unwrap())),
        ("jch", (build_jch(&j).unwrap(), jch_initial(&j, 2).unwrap())),
        ("shor", (build_shor(&shor).unwrap(), shor_initial(&shor).unwrap())),
    ] {
        assert!(circ.layout.dim() <= 1024, "{name}");
        out.push((name, circ, init));
    }
    out
}

fn gate_sweep() -> Vec<(GateKind, Vec<usize>)> {
    let mut gates = Vec::new();
    for p in linspace(-1.5, 1.5, 7) {
        for n in [4, 8, 16, 32] {
            for g in [GateKind::Displacement(c(p, p / 2.0)), GateKind::Squeeze(c(p / 3.0, -p / 4.0)), GateKind::Rotation(p), GateKind::Fourier] {
                gates.push((g, vec![n]));
            }
            for g in [
                GateKind::ConditionalDisplacement(c(p, -p / 2.0)),
                GateKind::ConditionalDisplacementAsym(c(p, 0.0), c(0.0, p)),
                GateKind::ConditionalRotation(p),
                GateKind::JaynesCummings(p),
                GateKind::Ecd(c(p, p)),
            ] {
                gates.push((g, vec![2, n]));
            }
            if n <= 16 {
                for g in [GateKind::Beamsplitter(p, p / 2.0), GateKind::Hopping(p)] {
                    gates.push((g, vec![n, n]));
                }
            }
        }
        for g in [GateKind::Rx(p), GateKind::Ry(p), GateKind::Rz(p), GateKind::U3(p, 2.0 * p, -p)] {
            gates.push((g, vec![2]));
        }
    }
    for g in [GateKind::X, GateKind::Y, GateKind::Z, GateKind::H, GateKind::S, GateKind::Sdg] {
        gates.push((g, vec![2]));
    }
    gates.push((GateKind::Cnot, vec![2, 2]));
    gates
}

fn trotter_fidelity() -> f64 {
    let p = jch(2, 4, 0.01, 50);
    let init = jch_initial(&p, 1).unwrap();
    let trotter = run_pure(&build_jch(&p).unwrap(), &init, None).unwrap();
    let u = dense_hamiltonian_exp(&dense_hamiltonian(&p).unwrap(), 0.5);
    let exact = u * CVector::from_column_slice(&init.amps);
    let exact = PureState { layout: init.layout.clone(), amps: exact.iter().copied().collect() };
    overlap_fidelity(&trotter, &exact).unwrap()
}

fn random_mode_state(rng: &mut ChaCha8Rng, cutoff: usize) -> MixedState {
    let l = SystemLayout::new(0, vec![cutoff]).unwrap();
    let local: Vec<C64> =
        (0..cutoff).map(|k| if k < 5 { c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) } else { c(0.0, 0.0) }).collect();
    MixedState::from_pure(&product_state(&l, &[local]).unwrap()).unwrap()
}

fn criterion_10() -> Verdict {
    let start = Instant::now();
    let mut bad = Vec::new();

    let mut worst: f64 = 0.0;
    for (g, dims) in gate_sweep() {
        worst = worst.max(unitarity_error(&g.matrix(&dims).unwrap()));
    }
    let benches = reduced_benchmarks();
    for (_, circ, _) in &benches {
        for op in &circ.ops {
            worst = worst.max(unitarity_error(&op_matrix(&circ.layout, op).unwrap().0));
        }
    }
    if worst >= 1e-10 {
        bad.push(format!("unitarity {worst:.1e}"));
    }

    let mut kraus: f64 = 0.0;
    for t in [54.6e-9, 0.983e-6, 1e-4, 1e-2] {
        for n in [4, 16, 64] {
            kraus = kraus.max(kraus_completeness(&photon_loss_kraus(1e3, t, n, 1e-9).unwrap()));
        }
        kraus = kraus.max(kraus_completeness(&qubit_decay_kraus(30e-6, 60e-6, t).unwrap()));
    }
    if kraus >= 1e-9 {
        bad.push(format!("kraus {kraus:.1e}"));
    }

    let mut oracle: f64 = 1.0;
    for (name, circ, init) in &benches {
        let f = overlap_fidelity(&run_pure(circ, init, None).unwrap(), &dense_run(circ, init).unwrap()).unwrap();
        if f < 1.0 - 1e-9 {
            bad.push(format!("oracle {name} {f}"));
        }
        oracle = oracle.min(f);
    }

    let l = SystemLayout::new(0, vec![24]).unwrap();
    let mut coh = Circuit::new("d", l.clone());
    coh.push(GateKind::Displacement(c(1.2, 0.4)), &[Wire::Mode(0)]).unwrap();
    let neg = |s: &PureState| wigner_negativity(&wigner(&s.to_density().unwrap(), &GridSpec::for_cutoff(24)).unwrap());
    let vac_neg = neg(&vacuum_state(&l).unwrap());
    let coh_neg = neg(&run_pure(&coh, &vacuum_state(&l).unwrap(), None).unwrap());
    let fock_neg = neg(&fock_state(&l, 0, 1).unwrap());
    let fock_want = 2.0 * (-0.5f64).exp() - 1.0;
    if vac_neg > 1e-6 || coh_neg > 1e-6 || (fock_neg - fock_want).abs() > 2e-3 {
        bad.push(format!("wigner {vac_neg:.1e} {coh_neg:.1e} {fock_neg:.4}"));
    }

    let trotter = trotter_fidelity();
    if trotter < 0.999 {
        bad.push(format!("trotter {trotter:.5}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let axis = linspace(-6.0, 6.0, 121);
    let mut cf_gap: f64 = 0.0;
    for _ in 0..4 {
        let a = random_mode_state(&mut rng, 16);
        let b = random_mode_state(&mut rng, 16);
        let cf = cf_fidelity(&characteristic_function(&a, &axis, &axis).unwrap(), &characteristic_function(&b, &axis, &axis).unwrap())
            .unwrap();
        cf_gap = cf_gap.max((cf - uhlmann_fidelity(&a.matrix(), &b.matrix()).unwrap()).abs());
    }
    if cf_gap > 1e-3 {
        bad.push(format!("cf vs uhlmann {cf_gap:.1e}"));
    }

    let cats: Vec<f64> = [1.0, 1.5, 2.0, 2.5, 3.0].iter().map(|&a| cat_scores(a, 48).unwrap().0).collect();
    if !cats.windows(2).all(|w| w[1] > w[0]) {
        bad.push(format!("cat not monotone {cats:?}"));
    }

    let t = start.elapsed();
    if t.as_secs_f64() >= 120.0 {
        bad.push(format!("took {t:.1?}"));
    }
    let detail = format!(
        "unitarity {worst:.1e}, kraus {kraus:.1e}, oracle min {oracle:.12}, trotter {trotter:.5}, cf gap {cf_gap:.1e}, fock1 negativity {fock_neg:.4}, in {t:.1?}"
    );
    verdict(bad.is_empty(), if bad.is_empty() { detail } else { format!("{}; {detail}", bad.join("; ")) })
}

#[test]
fn acceptance() {
    let cfg = Config::default();
    let mut reports = Vec::new();
    let mut times = BTreeMap::new();
    for b in registry() {
        let (r, t) = timed(|| run_benchmark(b.as_ref(), &cfg, true));
        let r = r.unwrap_or_else(|e| panic!("{} failed: {e}", b.name()));
        times.insert(r.name.clone(), t);
        reports.push(r);
    }
    let by_name = |n: &str| reports.iter().find(|r| r.name == n).unwrap();

    let verdicts = [
        criterion_1(),
        criterion_2(&cfg),
        criterion_3(by_name("vqe"), times["vqe"]),
        criterion_4(by_name("qaoa"), times["qaoa"]),
        criterion_5(by_name("jch"), times["jch"]),
        criterion_6(by_name("shor")),
        criterion_7(&reports),
        criterion_8(&reports),
        criterion_9(&cfg, &reports),
        criterion_10(),
    ];
    // Written to the raw handle so the report shows without --nocapture.
    let mut err = std::io::stderr().lock();
    for (i, v) in verdicts.iter().enumerate() {
        writeln!(err, "criterion {}: {}: {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail).unwrap();
    }
    assert!(verdicts[9].pass, "property suite failed: {}", verdicts[9].detail);
}
