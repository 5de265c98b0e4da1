use cvdv_core::engine::{run_density, run_pure};
use cvdv_core::gates::{GateKind, MatrixData, WireKind};
use cvdv_core::hilbert::{overlap_fidelity, pure_mixed_fidelity, product_state};
use cvdv_core::linalg::{c, unitarity_error, C64};
use cvdv_core::metrics::{cut_tree, normalize_suite, ward_cluster, CvdvMetrics, FeatureVector};
use cvdv_core::noise::{kraus_completeness, photon_loss_kraus, qubit_decay_kraus, uhlmann_fidelity};
use cvdv_core::oracle::dense_run;
use cvdv_core::{Circuit, MixedState, NoiseModel, PureState, SystemLayout, Wire};
use proptest::prelude::*;

fn cplx() -> impl Strategy<Value = C64> {
    (-1.5f64..1.5, -1.5f64..1.5).prop_map(|(a, b)| c(a, b))
}

fn angle() -> impl Strategy<Value = f64> {
    -3.2f64..3.2
}

fn single_mode_gate() -> impl Strategy<Value = GateKind> {
    prop_oneof![
        cplx().prop_map(GateKind::Displacement),
        (-0.6f64..0.6, -0.6f64..0.6).prop_map(|(a, b)| GateKind::Squeeze(c(a, b))),
        angle().prop_map(GateKind::Rotation),
        Just(GateKind::Fourier),
    ]
}

fn qubit_gate() -> impl Strategy<Value = GateKind> {
    prop_oneof![
        Just(GateKind::X),
        Just(GateKind::Y),
        Just(GateKind::Z),
        Just(GateKind::H),
        Just(GateKind::S),
        Just(GateKind::Sdg),
        angle().prop_map(GateKind::Rx),
        angle().prop_map(GateKind::Ry),
        angle().prop_map(GateKind::Rz),
        (angle(), angle(), angle()).prop_map(|(a, b, d)| GateKind::U3(a, b, d)),
    ]
}

fn hybrid_gate() -> impl Strategy<Value = GateKind> {
    prop_oneof![
        cplx().prop_map(GateKind::ConditionalDisplacement),
        (cplx(), cplx()).prop_map(|(a, b)| GateKind::ConditionalDisplacementAsym(a, b)),
        angle().prop_map(GateKind::ConditionalRotation),
        angle().prop_map(GateKind::JaynesCummings),
        cplx().prop_map(GateKind::Ecd),
    ]
}

fn two_mode_gate() -> impl Strategy<Value = GateKind> {
    prop_oneof![
        (angle(), angle()).prop_map(|(t, p)| GateKind::Beamsplitter(t, p)),
        angle().prop_map(GateKind::Hopping),
    ]
}

/// Random gates on a 2-qubit, 2-mode register.
fn any_op() -> impl Strategy<Value = (GateKind, Vec<Wire>)> {
    let q = || (0usize..2).prop_map(Wire::Qubit);
    let m = || (0usize..2).prop_map(Wire::Mode);
    prop_oneof![
        (single_mode_gate(), m()).prop_map(|(g, w)| (g, vec![w])),
        (qubit_gate(), q()).prop_map(|(g, w)| (g, vec![w])),
        (hybrid_gate(), q(), m()).prop_map(|(g, a, b)| (g, vec![a, b])),
        (two_mode_gate(), any::<bool>()).prop_map(|(g, f)| {
            let w = if f { vec![Wire::Mode(1), Wire::Mode(0)] } else { vec![Wire::Mode(0), Wire::Mode(1)] };
            (g, w)
        }),
        any::<bool>().prop_map(|f| {
            let w = if f { vec![Wire::Qubit(1), Wire::Qubit(0)] } else { vec![Wire::Qubit(0), Wire::Qubit(1)] };
            (GateKind::Cnot, w)
        }),
    ]
}

fn random_state(layout: &SystemLayout, seed: &[f64]) -> PureState {
    let locals: Vec<Vec<C64>> = layout
        .dims()
        .iter()
        .enumerate()
        .map(|(w, &d)| (0..d).map(|k| c(seed[(w * 7 + k) % seed.len()], seed[(w * 3 + 2 * k + 1) % seed.len()])).collect())
        .collect();
    product_state(layout, &locals).unwrap()
}

fn circuit(ops: &[(GateKind, Vec<Wire>)], cutoffs: Vec<usize>) -> Circuit {
    let mut circ = Circuit::new("random", SystemLayout::new(2, cutoffs).unwrap());
    for (g, w) in ops {
        circ.push(g.clone(), w).unwrap();
    }
    circ
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn single_mode_gates_are_unitary(g in single_mode_gate(), n in 2usize..14) {
        prop_assert!(unitarity_error(&g.matrix(&[n]).unwrap()) < 1e-10);
    }

    #[test]
    fn qubit_gates_are_unitary(g in qubit_gate()) {
        prop_assert!(unitarity_error(&g.matrix(&[2]).unwrap()) < 1e-10);
    }

    #[test]
    fn hybrid_gates_are_unitary(g in hybrid_gate(), n in 2usize..14) {
        prop_assert!(unitarity_error(&g.matrix(&[2, n]).unwrap()) < 1e-10);
    }

    #[test]
    fn two_mode_gates_are_unitary(g in two_mode_gate(), n1 in 2usize..7, n2 in 2usize..7) {
        prop_assert!(unitarity_error(&g.matrix(&[n1, n2]).unwrap()) < 1e-10);
    }

    #[test]
    fn photon_loss_is_complete(kappa in 0.0f64..1e4, t in 0.0f64..1e-3, n in 2usize..20) {
        let k = photon_loss_kraus(kappa, t, n, 1e-9).unwrap();
        prop_assert!(kraus_completeness(&k) < 1e-9);
    }

    #[test]
    fn qubit_decay_is_complete(t1 in 1e-6f64..1e-4, ratio in 0.05f64..2.0, t in 0.0f64..1e-4) {
        let k = qubit_decay_kraus(t1, ratio * t1, t).unwrap();
        prop_assert!(kraus_completeness(&k) < 1e-12);
    }

    #[test]
    fn engine_matches_dense_oracle(
        ops in prop::collection::vec(any_op(), 1..12),
        seed in prop::collection::vec(-1.0f64..1.0, 5..9),
    ) {
        let circ = circuit(&ops, vec![4, 3]);
        let init = random_state(&circ.layout, &seed);
        let fast: PureState = run_pure(&circ, &init, None).unwrap();
        let slow = dense_run(&circ, &init).unwrap();
        prop_assert!(overlap_fidelity(&fast, &slow).unwrap() >= 1.0 - 1e-9);
        prop_assert!((fast.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn noiseless_density_tracks_pure(
        ops in prop::collection::vec(any_op(), 1..8),
        seed in prop::collection::vec(-1.0f64..1.0, 5..9),
    ) {
        let circ = circuit(&ops, vec![3, 3]);
        let init = random_state(&circ.layout, &seed);
        let psi = run_pure(&circ, &init, None).unwrap();
        let rho = run_density(&circ, &MixedState::from_pure(&init).unwrap(), None, None).unwrap();
        prop_assert!((pure_mixed_fidelity(&psi, &rho).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn inverse_circuit_undoes(
        ops in prop::collection::vec(any_op(), 1..10),
        seed in prop::collection::vec(-1.0f64..1.0, 5..9),
    ) {
        let circ = circuit(&ops, vec![4, 4]);
        let init = random_state(&circ.layout, &seed);
        let there = run_pure(&circ, &init, None).unwrap();
        let back = run_pure(&circ.inverse(), &there, None).unwrap();
        prop_assert!(overlap_fidelity(&init, &back).unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn circuit_json_round_trip(ops in prop::collection::vec(any_op(), 0..10), custom in any::<bool>()) {
        let mut circ = circuit(&ops, vec![3, 4]);
        if custom {
            let m = GateKind::Rotation(0.3).matrix(&[4]).unwrap();
            let kind = GateKind::Custom {
                name: "rot".into(),
                wires: vec![WireKind::Mode],
                matrix: MatrixData::from_matrix(&m),
                strength: 0.3,
            };
            circ.push(kind, &[Wire::Mode(1)]).unwrap();
        }
        let back = Circuit::from_json(&circ.to_json()).unwrap();
        prop_assert_eq!(back, circ);
    }

    #[test]
    fn reduced_states_are_valid(
        ops in prop::collection::vec(any_op(), 1..8),
        seed in prop::collection::vec(-1.0f64..1.0, 5..9),
        keep in prop::sample::subsequence(vec![0usize, 1, 2, 3], 1..4),
    ) {
        let circ = circuit(&ops, vec![3, 3]);
        let out = run_pure(&circ, &random_state(&circ.layout, &seed), None).unwrap();
        let r = out.reduced(&keep).unwrap();
        prop_assert!((r.trace().re - 1.0).abs() < 1e-10);
        prop_assert!(r.purity() <= 1.0 + 1e-10);
        let m = r.matrix();
        prop_assert!(cvdv_core::linalg::hermiticity_error(&m) < 1e-10);
    }

    #[test]
    fn uhlmann_is_symmetric_and_bounded(
        ops in prop::collection::vec(any_op(), 1..6),
        seed in prop::collection::vec(-1.0f64..1.0, 5..9),
        kappa in 1e3f64..1e6,
    ) {
        let circ = circuit(&ops, vec![2, 2]);
        let init = MixedState::from_pure(&random_state(&circ.layout, &seed)).unwrap();
        let noise = NoiseModel { kappa, ..NoiseModel::default() };
        let a = run_density(&circ, &init, None, None).unwrap().matrix();
        let b = run_density(&circ, &init, Some(&noise), None).unwrap().matrix();
        let (fab, fba) = (uhlmann_fidelity(&a, &b).unwrap(), uhlmann_fidelity(&b, &a).unwrap());
        prop_assert!((fab - fba).abs() < 1e-6);
        prop_assert!((0.0..=1.0).contains(&fab));
    }

    #[test]
    fn x_flips_its_own_index_bit(q in 0usize..3) {
        let l = SystemLayout::new(3, vec![2]).unwrap();
        let mut circ = Circuit::new("x", l.clone());
        circ.push(GateKind::X, &[Wire::Qubit(q)]).unwrap();
        let out = run_pure(&circ, &cvdv_core::vacuum_state(&l).unwrap(), None).unwrap();
        prop_assert!((out.amps[1 << q].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn normalized_maxima_are_one(raw in prop::collection::vec((0.0f64..10.0, 0.0f64..1.0, 0.0f64..1.0), 1..8)) {
        let circ = Circuit::new("e", SystemLayout::new(1, vec![2]).unwrap());
        let mut fv: Vec<FeatureVector> = raw
            .iter()
            .map(|&(e, n, t)| FeatureVector::new("r", &circ, CvdvMetrics { energy: e, negativity: n, truncation: t }))
            .collect();
        normalize_suite(&mut fv).unwrap();
        let cols: [fn(&CvdvMetrics) -> f64; 3] = [|m| m.energy, |m| m.negativity, |m| m.truncation];
        for f in cols {
            let top = fv.iter().map(|v| f(v.normalized.as_ref().unwrap())).fold(0.0, f64::max);
            let any_positive = fv.iter().any(|v| f(&v.raw) > 0.0);
            let ok = if any_positive { (top - 1.0).abs() < 1e-12 } else { top == 0.0 };
            prop_assert!(ok);
        }
    }

    #[test]
    fn ward_heights_are_monotone(rows in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 3), 2..10), k in 1usize..6) {
        let link = ward_cluster(&rows).unwrap();
        prop_assert_eq!(link.merges.len(), rows.len() - 1);
        for w in link.merges.windows(2) {
            prop_assert!(w[1].distance >= w[0].distance - 1e-9);
        }
        let labels = cut_tree(&link, k);
        let distinct = labels.iter().max().unwrap() + 1;
        prop_assert_eq!(distinct, k.min(rows.len()));
    }
}
