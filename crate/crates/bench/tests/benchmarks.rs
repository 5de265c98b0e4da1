use cvdv_bench::benchmarks::{optimize_qaoa, qaoa_params, qaoa_scores, Cat, Gkp, Qft, Shor, StateTransfer, Vqe};
use cvdv_bench::config::Config;
use cvdv_bench::optimize::OptResult;
use cvdv_bench::protocols::cat::{build_cat, build_gkp};
use cvdv_bench::protocols::jch::{build_jch, dense_hamiltonian, initial_state as jch_initial, JchParams};
use cvdv_bench::protocols::qaoa::{build_qaoa, CostPoly, QaoaParams};
use cvdv_bench::protocols::qft::{build_qft, QftParams};
use cvdv_bench::protocols::shor::{build_shor, factors_from_period, initial_state as shor_initial, multiplicative_order, ShorParams};
use cvdv_bench::protocols::transfer::{push_cv_to_dv, push_dv_to_cv};
use cvdv_bench::protocols::vqe::{build_ansatz, expectation, outcome_cost, Knapsack, VqeLayout, PARAMS_PER_LAYER};
use cvdv_bench::{find, registry, Benchmark};
use cvdv_core::hilbert::overlap_fidelity;
use cvdv_core::linalg::{c, CVector};
use cvdv_core::oracle::{dense_hamiltonian_exp, dense_run};
use cvdv_core::{circuit_features, run_pure, vacuum_state, Circuit, GateKind, PureState, SystemLayout, Wire};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn transfer(qubits: usize, cutoff: usize, to_dv: bool) -> Circuit {
    let mut circ = Circuit::new("t", SystemLayout::new(qubits, vec![cutoff]).unwrap());
    let q: Vec<usize> = (0..qubits).collect();
    if to_dv {
        push_cv_to_dv(&mut circ, &q, 0, 0.39).unwrap();
    } else {
        push_dv_to_cv(&mut circ, &q, 0, 0.39).unwrap();
    }
    circ
}

fn qft(cutoff: usize) -> Circuit {
    let p = QftParams { n: 2, ancilla: 1, append: 2, cutoff, spacing: 0.29, pre_shift: 0.0, post_shift: 0.0 };
    build_qft(&p).unwrap().0
}

fn qaoa(cutoff: usize, angles: &[f64]) -> Circuit {
    let p = QaoaParams { cost: CostPoly::shifted_square(3.0), cutoff, squeeze: -0.5, allow_high_degree: false };
    build_qaoa(&p, angles).unwrap()
}

fn jch(sites: usize, cutoff: usize, dt: f64, steps: usize) -> JchParams {
    let w = 4.0 * std::f64::consts::PI;
    JchParams { sites, omega_c: w, omega_tls: w, hop: 1.0, coupling: 0.5, dt, steps, cutoff }
}

fn shor(a: u64, cutoffs: [usize; 3]) -> ShorParams {
    ShorParams { a, n: 15, slices: 2, squeeze: 1.202, stages: 9, cutoffs, ideal_comb: None }
}

fn random_params(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

#[test]
fn registry_lists_eight_unique_benchmarks() {
    let names: Vec<&str> = registry().iter().map(|b| b.name()).collect();
    assert_eq!(names.len(), 8);
    let mut sorted = names.clone();
    sorted.sort_unstable();
    sorted.dedup();
    assert_eq!(sorted.len(), 8);
    assert!(find("nope").is_err());
}

#[test]
fn builders_are_deterministic() {
    let build = || {
        vec![
            transfer(4, 64, true).to_json(),
            build_cat(2.0, 32).unwrap().to_json(),
            build_gkp(9, 0.222, 64).unwrap().to_json(),
            qft(16).to_json(),
            build_ansatz(5, [8, 8], &random_params(5 * PARAMS_PER_LAYER, 3)).unwrap().to_json(),
            qaoa(32, &random_params(10, 4)).to_json(),
            build_jch(&jch(3, 8, 0.1, 1)).unwrap().to_json(),
        ]
    };
    assert_eq!(build(), build());
}

/// Rows of the published feature table: qubits, qumodes, qubit gates,
/// qumode gates, hybrid gates, depth.
#[test]
fn structural_counts_match_published_table() {
    let counts = |c: &Circuit| {
        let f = circuit_features(c);
        [f.qubits, f.qumodes, f.qubit_gates, f.qumode_gates, f.hybrid_gates, f.depth]
    };
    assert_eq!(counts(&build_cat(2.0, 32).unwrap()), [1, 1, 6, 0, 2, 8]);
    assert_eq!(counts(&build_gkp(9, 0.222, 64).unwrap()), [1, 1, 48, 1, 16, 64]);
    assert_eq!(counts(&build_ansatz(5, [8, 8], &vec![0.1; 40]).unwrap()), [1, 2, 10, 0, 10, 20]);
    assert_eq!(counts(&qaoa(32, &[0.1; 10])), [0, 1, 0, 11, 0, 11]);
    assert_eq!(counts(&build_jch(&jch(3, 8, 0.1, 1)).unwrap()), [3, 3, 3, 5, 3, 4]);
    // Gate counts match; depth follows our layering (see depth notes).
    assert_eq!(counts(&transfer(4, 64, true))[..5], [4, 1, 9, 0, 8]);
    assert_eq!(counts(&qft(16))[..5], [5, 1, 23, 3, 20]);
    assert!(StateTransfer.depth_note().is_some() && Qft.depth_note().is_some());
}

#[test]
fn engine_matches_dense_oracle_on_every_benchmark() {
    let ansatz = build_ansatz(5, [8, 8], &random_params(5 * PARAMS_PER_LAYER, 11)).unwrap();
    let s = shor(7, [8, 16, 2]);
    let cases: Vec<(&str, Circuit, Option<PureState>)> = vec![
        ("transfer cv->dv", transfer(4, 32, true), None),
        ("transfer dv->cv", transfer(4, 32, false), None),
        ("cat", build_cat(2.0, 32).unwrap(), None),
        ("gkp", build_gkp(9, 0.222, 64).unwrap(), None),
        ("qft", qft(16), None),
        ("vqe", ansatz, None),
        ("qaoa", qaoa(32, &random_params(10, 12)), None),
        ("jch", build_jch(&jch(3, 4, 0.1, 3)).unwrap(), Some(jch_initial(&jch(3, 4, 0.1, 3), 2).unwrap())),
        ("shor", build_shor(&s).unwrap(), Some(shor_initial(&s).unwrap())),
    ];
    for (name, circ, init) in cases {
        assert!(circ.layout.dim() <= 1024, "{name}");
        let init = init.unwrap_or_else(|| vacuum_state(&circ.layout).unwrap());
        let fast = run_pure(&circ, &init, None).unwrap();
        let slow = dense_run(&circ, &init).unwrap();
        let f = overlap_fidelity(&fast, &slow).unwrap();
        assert!(f >= 1.0 - 1e-9, "{name}: {f}");
    }
}

fn trotter_fidelity(p: &JchParams, t: f64) -> f64 {
    let init = jch_initial(p, 1).unwrap();
    let trotter = run_pure(&build_jch(p).unwrap(), &init, None).unwrap();
    let u = dense_hamiltonian_exp(&dense_hamiltonian(p).unwrap(), t);
    let exact = u * CVector::from_column_slice(&init.amps);
    let exact = PureState { layout: init.layout.clone(), amps: exact.iter().copied().collect() };
    overlap_fidelity(&trotter, &exact).unwrap()
}

#[test]
fn trotter_circuit_tracks_exact_evolution() {
    assert!(trotter_fidelity(&jch(2, 4, 0.01, 50), 0.5) >= 0.999);
    assert!(trotter_fidelity(&jch(3, 4, 0.01, 50), 0.5) >= 0.99);
    // One tiny step is close to the identity.
    let p = jch(3, 4, 1e-4, 1);
    let init = jch_initial(&p, 2).unwrap();
    let out = run_pure(&build_jch(&p).unwrap(), &init, None).unwrap();
    assert!(overlap_fidelity(&out, &init).unwrap() >= 1.0 - 1e-4);
}

#[test]
fn knapsack_optimum_by_enumeration() {
    let k = Knapsack { values: vec![1.0, 4.0, 5.0, 10.0], weights: vec![2.5, 1.0, 2.0, 3.0], capacity: 7.0 };
    let (items, value, weight) = k.brute_force();
    assert_eq!((items, value, weight), (vec![0, 1, 1, 1], 19.0, 6.0));
    // Over all items and every 3-bit slack, the QUBO minimum sits on the
    // same selection.
    let lam = k.default_penalty();
    let mut best = (f64::INFINITY, vec![], 0);
    for mask in 0..16usize {
        let x: Vec<u8> = (0..4).map(|i| ((mask >> (3 - i)) & 1) as u8).collect();
        for s in 0..8 {
            let q = k.qubo(&x, s, lam);
            if q < best.0 {
                best = (q, x.clone(), s);
            }
        }
    }
    assert_eq!(best, (-19.0, vec![0, 1, 1, 1], 1));
}

#[test]
fn vqe_objective_at_zero_parameters_is_vacuum_cost() {
    let k = Knapsack { values: vec![1.0, 4.0, 5.0, 10.0], weights: vec![2.5, 1.0, 2.0, 3.0], capacity: 7.0 };
    let lam = k.default_penalty();
    let lay = VqeLayout { cutoffs: [8, 8] };
    let e = expectation(&k, 5, [8, 8], &vec![0.0; 5 * PARAMS_PER_LAYER], lam).unwrap();
    assert!((e - outcome_cost(&k, &lay, 0, 0, 0, lam)).abs() < 1e-9);
    assert!((e - 49.0 * lam).abs() < 1e-9);
    assert_eq!(lay.decode(0, 7, 0), vec![0, 1, 1, 1, 0, 0, 0]);
}

#[test]
fn qaoa_rejects_high_degree_without_opt_in() {
    let p = QaoaParams { cost: CostPoly { coeffs: vec![0.0, 0.0, 0.0, 1.0] }, cutoff: 16, squeeze: -0.5, allow_high_degree: false };
    assert!(build_qaoa(&p, &[0.1, 0.1]).is_err());
    assert!(build_qaoa(&QaoaParams { allow_high_degree: true, ..p }, &[0.1, 0.1]).is_ok());
}

#[test]
fn qaoa_zero_depth_is_squeezed_vacuum() {
    let c = qaoa(32, &[]);
    assert_eq!(c.ops.len(), 1);
    let out = run_pure(&c, &vacuum_state(&c.layout).unwrap(), None).unwrap();
    let n = cvdv_core::engine::mean_photon(&out, 0).unwrap();
    assert!((n - 0.5f64.sinh().powi(2)).abs() < 1e-6);
}

#[test]
fn qaoa_mean_tracks_cost_center() {
    for center in [-2.0, 0.0, 1.0] {
        let mut cfg = Config::default();
        cfg.qaoa.cost = vec![center * center, -2.0 * center, 1.0];
        cfg.qaoa.restarts = 2;
        let p = qaoa_params(&cfg);
        let (best, _): (OptResult, _) = optimize_qaoa(&cfg, &p, cfg.qaoa.depth).unwrap();
        let (_, mean, _) = qaoa_scores(&p, &best.x).unwrap();
        assert!((mean - center).abs() < 0.3, "center {center}: mean {mean}");
    }
}

#[test]
fn exact_period_factors_fifteen() {
    assert_eq!(multiplicative_order(7, 15), Some(4));
    let (p, q) = factors_from_period(7, 15, 4).unwrap();
    let mut f = [p, q];
    f.sort_unstable();
    assert_eq!(f, [3, 5]);
    // Odd period gives nothing.
    assert_eq!(multiplicative_order(4, 15), Some(2));
    assert!(factors_from_period(14, 15, 2).is_none());
}

#[test]
fn cat_fidelity_grows_with_alpha() {
    let cfg = Config::default();
    let o = Cat.execute(&cfg).unwrap();
    assert!(o.fidelity.unwrap() >= 0.98);
    let sweep: Vec<f64> = o.task["alpha_sweep"].as_array().unwrap().iter().map(|v| v["fidelity"].as_f64().unwrap()).collect();
    assert!(sweep.windows(2).all(|w| w[1] >= w[0]), "{sweep:?}");
}

#[test]
fn gkp_fidelity_near_published() {
    let o = Gkp.execute(&Config::default()).unwrap();
    assert!((o.fidelity.unwrap() - 0.66).abs() <= 0.03);
}

#[test]
fn transfer_reads_cells_and_peaks() {
    let cfg = Config::default();
    let o = StateTransfer.execute(&cfg).unwrap();
    let series = |key: &str| -> Vec<f64> { o.task[key].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect() };
    let hist = series("vacuum_histogram");
    let argmax = hist.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    assert!((7..=8).contains(&argmax), "{hist:?}");
    let cat = series("cat_histogram");
    let peaks: Vec<usize> = (1..cat.len() - 1).filter(|&i| cat[i] > cat[i - 1] && cat[i] >= cat[i + 1] && cat[i] > 0.05).collect();
    assert_eq!(peaks.len(), 2, "{cat:?}");
    assert!(peaks[0] < 8 && peaks[1] >= 8);
    assert!(o.task["round_trip_fidelity"].as_f64().unwrap() >= 0.95);
}

#[test]
fn squeezed_cell_states_read_their_index() {
    let circ = transfer(4, 64, true);
    for k in 0..16 {
        let x = cvdv_bench::protocols::transfer::cell_center(k, 4, 0.39);
        let mut prep = Circuit::new("p", circ.layout.clone());
        prep.push(GateKind::Squeeze(c(1.5, 0.0)), &[Wire::Mode(0)]).unwrap();
        prep.push(GateKind::Displacement(c(x / std::f64::consts::SQRT_2, 0.0)), &[Wire::Mode(0)]).unwrap();
        prep.extend(&circ).unwrap();
        let out = run_pure(&prep, &vacuum_state(&circ.layout).unwrap(), None).unwrap();
        // Register value with qubit i as bit i.
        let p: f64 = out.amps.iter().enumerate().filter(|(i, _)| i % 16 == k).map(|(_, a)| a.norm_sqr()).sum();
        assert!(p > 0.5, "cell {k}: {p}");
    }
}

#[test]
fn ideal_comb_beats_protocol_comb() {
    let cfg = Config::default();
    let o = Shor.execute(&cfg).unwrap();
    let real = o.task["peak_mass"].as_f64().unwrap();
    let ideal = o.task["peak_mass_ideal_comb"].as_f64().unwrap();
    assert!(ideal > real, "ideal {ideal} protocol {real}");
}

#[test]
fn config_round_trips_and_rejects_unknown_keys() {
    let cfg = Config::default();
    assert_eq!(Config::from_toml(&cfg.to_toml()).unwrap(), cfg);
    assert!(Config::from_toml("[cat]\nbeta = 1.0\n").is_err());
    assert!(Config::from_toml("[noise]\nt1 = 30e-6\nt2 = 65e-6\n").is_err());
    assert!(Config::from_toml("benchmarks = [\"cat\", \"warp\"]\n").is_err());
}

#[test]
fn vqe_reports_exhaustive_optimum() {
    let mut cfg = Config::default();
    cfg.vqe.restarts = 1;
    cfg.vqe.max_iters = 20;
    let o = Vqe.execute(&cfg).unwrap();
    assert_eq!(o.task["exhaustive_optimum"]["value"].as_f64(), Some(19.0));
    assert!(o.task["objective"].as_f64().unwrap() <= o.task["initial_objective"].as_f64().unwrap());
}
