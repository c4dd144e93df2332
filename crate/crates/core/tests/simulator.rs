use aqa_core::adders::{build, eval_classical, AdderSpec, Family, Inputs};
use aqa_core::circuit::{decompose_toffoli, Circuit, GateDurations, GateKind, GateOp, Role};
use aqa_core::exec::Exec;
use aqa_core::noise::{
    KrausChannel, Matrix, NoiseKind, NoiseModel, ToffoliPolicy, CALIBRATED_DURATION_SCALE,
    CALIBRATED_GATE_TIME,
};
use aqa_core::sim::{
    calibrate_duration_scale, fidelity_sweep, fidelity_sweep_with, measured_success,
    output_distribution, NoisyRunner,
};
use aqa_core::Error;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn preset(name: &str) -> NoiseModel {
    NoiseModel::preset(name).unwrap()
}

fn native(name: &str) -> NoiseModel {
    NoiseModel {
        toffoli_policy: ToffoliPolicy::Native,
        ..preset(name)
    }
}

fn fidelity(family: Family, n: usize, model: &NoiseModel) -> f64 {
    fidelity_sweep(&AdderSpec::new(family, n).unwrap(), model)
        .unwrap()
        .avg_success_probability
}

// Full-space reference evolution, independent of the support-restricted
// simulator.

fn embed(k: &Matrix, nq: usize, qubits: &[usize]) -> Matrix {
    let d = 1 << nq;
    let mask: usize = qubits.iter().map(|q| 1 << q).sum();
    let local = |i: usize| -> usize {
        qubits
            .iter()
            .enumerate()
            .map(|(j, &q)| (i >> q & 1) << j)
            .sum()
    };
    DMatrix::from_fn(d, d, |r, col| {
        if r & !mask == col & !mask {
            k[(local(r), local(col))]
        } else {
            c(0.0, 0.0)
        }
    })
}

fn gate_matrix(gate: &GateOp, nq: usize) -> Matrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let one = |m: [Complex64; 4]| embed(&Matrix::from_row_slice(2, 2, &m), nq, gate.qubits());
    match gate.kind() {
        GateKind::H => one([c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]),
        GateKind::T => one([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, s)]),
        GateKind::Tdg => one([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, -s)]),
        _ => {
            let d = 1 << nq;
            let controls_set = |i: usize| gate.controls().iter().all(|&q| i >> q & 1 == 1);
            let image = |i: usize| {
                if controls_set(i) {
                    i ^ 1 << gate.target()
                } else {
                    i
                }
            };
            DMatrix::from_fn(d, d, |r, col| {
                if image(col) == r {
                    c(1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                }
            })
        }
    }
}

fn apply_kraus(rho: &Matrix, ch: &KrausChannel, nq: usize, qubits: &[usize]) -> Matrix {
    ch.ops()
        .iter()
        .map(|k| {
            let full = embed(k, nq, qubits);
            &full * rho * full.adjoint()
        })
        .fold(Matrix::zeros(rho.nrows(), rho.ncols()), |acc, m| acc + m)
}

fn reference_run(circuit: &Circuit, model: &NoiseModel, start: usize) -> Matrix {
    let nq = circuit.num_qubits();
    let circuit = match model.toffoli_policy {
        ToffoliPolicy::Native => circuit.clone(),
        ToffoliPolicy::Decompose => decompose_toffoli(circuit),
    };
    let d = 1 << nq;
    let mut rho = Matrix::zeros(d, d);
    rho[(0, 0)] = c(1.0, 0.0);
    let step = |rho: Matrix, gate: &GateOp, prep: bool| {
        let u = gate_matrix(gate, nq);
        let mut out = &u * rho * u.adjoint();
        for (ch, slots) in model.gate_channels(gate.kind(), prep).unwrap() {
            let qubits: Vec<usize> = slots.iter().map(|&s| gate.qubits()[s]).collect();
            out = apply_kraus(&out, &ch, nq, &qubits);
        }
        out
    };
    for q in (0..nq).filter(|q| start >> q & 1 == 1) {
        rho = step(rho, &GateOp::x(q), true);
    }
    for g in circuit.gates() {
        rho = step(rho, g, false);
    }
    if let Some(ch) = model.measure_channel().unwrap() {
        for q in circuit.measured_qubits() {
            rho = apply_kraus(&rho, &ch, nq, &[q]);
        }
    }
    rho
}

#[test]
fn pass_through_closed_forms() {
    let gamma: f64 = 0.01;
    let p: f64 = 0.005;
    assert!(
        (fidelity(Family::Aqa1, 4, &preset("amplitude")) - (1.0 - gamma / 2.0).powi(4)).abs()
            < 1e-12
    );
    assert!(
        (fidelity(Family::Aqa1, 4, &preset("bitflip")) - (1.0f64 - 0.01 / 2.0).powi(4)).abs()
            < 1e-12
    );
    assert!(
        (fidelity(Family::Aqa1, 4, &preset("depolarizing")) - (1.0 - p / 4.0).powi(4)).abs()
            < 1e-12
    );
    // the carry bit is one more independently loaded input bit
    assert!(
        (fidelity(Family::Aqa3, 4, &preset("depolarizing")) - (1.0 - p / 4.0).powi(5)).abs()
            < 1e-12
    );
    assert!(
        (fidelity(Family::Aqa3, 4, &preset("amplitude")) - (1.0 - gamma / 2.0).powi(5)).abs()
            < 1e-12
    );
}

#[test]
fn single_cnot_closed_forms() {
    // bitflip: each sum bit is wrong on an odd number of {prep a, prep b,
    // CNOT target} flips with rates {1/2 * 0.01, 1/2 * 0.01, 0.01}
    let (x, y, z) = (0.005, 0.005, 0.01);
    let odd: f64 = x * (1.0 - y) * (1.0 - z)
        + y * (1.0 - x) * (1.0 - z)
        + z * (1.0 - x) * (1.0 - y)
        + x * y * z;
    assert!((fidelity(Family::Aqa2, 4, &preset("bitflip")) - (1.0 - odd).powi(4)).abs() < 1e-12);
    // two-qubit depolarizing flips the target in 8 of its 15 non-identity
    // Paulis; prep flips compose by parity as above
    let (x, y, z) = (0.00125, 0.00125, 0.01 * 8.0 / 16.0);
    let odd: f64 = x * (1.0 - y) * (1.0 - z)
        + y * (1.0 - x) * (1.0 - z)
        + z * (1.0 - x) * (1.0 - y)
        + x * y * z;
    assert!(
        (fidelity(Family::Aqa2, 4, &preset("depolarizing")) - (1.0 - odd).powi(4)).abs() < 1e-12
    );
}

#[test]
fn dephasing_cannot_touch_basis_states_without_superpositions() {
    for family in Family::ALL {
        assert_eq!(fidelity(family, 3, &native("phase")), 1.0, "{family}");
    }
    let decomposed = preset("phase");
    for family in Family::EXACT {
        assert!(fidelity(family, 3, &decomposed) < 1.0, "{family}");
    }
    for family in [Family::Aqa1, Family::Aqa3] {
        assert_eq!(fidelity(family, 3, &decomposed), 1.0);
    }
}

#[test]
fn toffoli_policies_agree_on_toffoli_free_designs() {
    for family in [Family::Aqa1, Family::Aqa2, Family::Aqa3, Family::Aqa4] {
        for name in ["depolarizing", "bitflip", "thermal"] {
            let a = fidelity(family, 3, &preset(name));
            let b = fidelity(family, 3, &native(name));
            assert!((a - b).abs() < 1e-14, "{family} {name}");
        }
    }
}

#[test]
fn idle_decay_hits_the_ripple_lsb_hardest() {
    let model = NoiseModel {
        idle: true,
        ..native("amplitude")
    };
    let r = fidelity_sweep(&AdderSpec::new(Family::Cqa0, 4).unwrap(), &model).unwrap();
    assert!(r.bit_errors[0] > r.bit_errors[3], "{:?}", r.bit_errors);
    let still = fidelity(Family::Cqa0, 4, &native("amplitude"));
    assert!(r.avg_success_probability < still);
}

#[test]
fn idle_mode_is_inert_for_zero_depth_designs() {
    for name in ["amplitude", "thermal"] {
        let idle = NoiseModel {
            idle: true,
            ..preset(name)
        };
        let a = fidelity(Family::Aqa1, 3, &idle);
        assert!((a - fidelity(Family::Aqa1, 3, &preset(name))).abs() < 1e-14);
    }
}

#[test]
fn trace_and_hermiticity_through_the_largest_adder() {
    let spec = AdderSpec::new(Family::Cqa1, 4).unwrap();
    let circuit = build(&spec);
    for name in ["depolarizing", "amplitude", "thermal", "bitflip"] {
        let runner = NoisyRunner::new(&circuit, &preset(name)).unwrap();
        for (a, b) in [(0, 0), (15, 15), (9, 6)] {
            let rho = runner.run(&Inputs::new(a, b)).unwrap();
            assert!((rho.trace().re - 1.0).abs() < 1e-9, "{name}");
            assert!(rho.trace().im.abs() < 1e-12);
            assert!(rho.hermiticity_error() < 1e-12, "{name}");
        }
    }
}

#[test]
fn state_stays_positive_semidefinite() {
    let spec = AdderSpec::new(Family::Cqa0, 2).unwrap();
    let circuit = build(&spec);
    for name in ["depolarizing", "amplitude", "thermal", "phase"] {
        let rho = NoisyRunner::new(&circuit, &preset(name))
            .unwrap()
            .run(&Inputs::new(3, 1))
            .unwrap();
        let eig = rho.to_matrix().symmetric_eigenvalues();
        assert!(eig.iter().all(|&e| e > -1e-12), "{name}");
    }
}

#[test]
fn adjoint_sweep_matches_forward_runs() {
    for family in Family::ALL {
        let spec = AdderSpec::new(family, 2).unwrap();
        let circuit = build(&spec);
        for name in [
            "depolarizing",
            "amplitude",
            "thermal",
            "bitflip",
            "phase",
            "spam",
        ] {
            let model = preset(name);
            let runner = NoisyRunner::new(&circuit, &model).unwrap();
            let dists = runner.output_distributions(2, Exec::Sequential).unwrap();
            let report = fidelity_sweep(&spec, &model).unwrap();
            for (i, dist) in dists.iter().enumerate() {
                let inputs = Inputs::new(i as u64 / 4, i as u64 % 4);
                let rho = runner.run(&inputs).unwrap();
                let forward = output_distribution(&rho, runner.circuit());
                for (p, q) in dist.iter().zip(&forward) {
                    assert!((p - q).abs() < 1e-12, "{family} {name} {i}");
                }
                let expected = eval_classical(&spec, inputs.a, inputs.b, 0).unwrap();
                let s = measured_success(&rho, runner.circuit(), expected, model.readout.as_ref());
                assert!((s - report.per_input[i]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn readout_errors_compose_per_bit() {
    // prep flips 0.02 / 0.04, then symmetric 0.1 confusion on each bit
    let zero = 0.98 * 0.9 + 0.02 * 0.1;
    let one = 0.96 * 0.9 + 0.04 * 0.1;
    let per_bit: f64 = 0.5 * (zero + one);
    let f = fidelity(Family::Aqa1, 4, &preset("spam"));
    assert!((f - per_bit.powi(4)).abs() < 1e-12);
}

#[test]
fn execution_strategies_agree() {
    let spec = AdderSpec::new(Family::Tpl13, 3).unwrap();
    let model = preset("bitflip");
    let seq = fidelity_sweep_with(&spec, &model, Exec::Sequential).unwrap();
    let par = fidelity_sweep_with(&spec, &model, Exec::default()).unwrap();
    assert_eq!(seq, par);
}

#[test]
fn fidelity_falls_as_noise_grows() {
    for kind in [
        NoiseKind::Depolarizing,
        NoiseKind::Bitflip,
        NoiseKind::AmplitudeDamping,
    ] {
        let mut last = 1.0;
        for p in [0.0, 0.002, 0.01, 0.05, 0.2] {
            let model = NoiseModel {
                kind,
                p1: p,
                p2: p,
                ..NoiseModel::default()
            };
            let f = fidelity(Family::Aqa5, 3, &model);
            assert!(f <= last + 1e-15, "{kind:?} {p}");
            last = f;
        }
        assert!(last < 1.0);
    }
}

#[test]
fn thermal_calibration_reproduces_constants() {
    let spec = AdderSpec::new(Family::Aqa1, 4).unwrap();
    let base = NoiseModel {
        durations: GateDurations::device(),
        ..preset("thermal")
    };
    let s = calibrate_duration_scale(&spec, &base, 0.951).unwrap();
    assert!((s / CALIBRATED_DURATION_SCALE - 1.0).abs() < 1e-6, "{s}");
    assert!((fidelity(Family::Aqa1, 4, &preset("thermal")) - 0.951).abs() < 1e-6);

    let uniform = NoiseModel {
        durations: GateDurations::uniform(1e-6),
        ..base
    };
    let t = 1e-6 * calibrate_duration_scale(&spec, &uniform, 0.951).unwrap();
    assert!((t / CALIBRATED_GATE_TIME - 1.0).abs() < 1e-6, "{t}");
    assert!(calibrate_duration_scale(&spec, &preset("bitflip"), 0.9).is_err());
}

#[test]
fn qubit_budget_is_enforced() {
    let circuit = build(&AdderSpec::new(Family::Cqa1, 6).unwrap());
    assert!(matches!(
        NoisyRunner::new(&circuit, &preset("bitflip")),
        Err(Error::QubitBudget { qubits: 14, .. })
    ));
}

fn gate_strategy(nq: usize) -> impl Strategy<Value = GateOp> {
    (0..6usize, 0..nq, 0..nq, 0..nq).prop_filter_map("distinct qubits", |(k, a, b, t)| match k {
        0 => Some(GateOp::x(a)),
        1 => GateOp::cnot(a, b).ok(),
        2 => GateOp::toffoli(a, b, t).ok(),
        3 => GateOp::new(GateKind::H, &[a]).ok(),
        4 => GateOp::new(GateKind::T, &[a]).ok(),
        _ => GateOp::new(GateKind::Tdg, &[a]).ok(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn runner_matches_full_space_reference(
        gates in prop::collection::vec(gate_strategy(4), 0..12),
        preset_index in 0usize..5,
        decompose in any::<bool>(),
        start in 0usize..16,
    ) {
        let name = ["depolarizing", "amplitude", "thermal", "bitflip", "phase"][preset_index];
        let model = NoiseModel {
            toffoli_policy: if decompose { ToffoliPolicy::Decompose } else { ToffoliPolicy::Native },
            ..preset(name)
        };
        let roles = [(Role::A, vec![0, 1]), (Role::B, vec![2, 3]), (Role::Sum, vec![2, 3])]
            .into_iter()
            .collect();
        let mut circuit = Circuit::new(4, roles).unwrap();
        for g in gates {
            circuit.append(g).unwrap();
        }
        let inputs = Inputs::new((start & 3) as u64, (start >> 2) as u64);
        let runner = NoisyRunner::new(&circuit, &model).unwrap();
        let got = runner.run(&inputs).unwrap().to_matrix();
        let want = reference_run(&circuit, &model, start);
        prop_assert!((&got - &want).norm() < 1e-12);

        // pulled-back projectors give the same outcome probabilities
        let prepared = runner.prepare(&inputs).unwrap();
        let dist = output_distribution(&runner.run(&inputs).unwrap(), runner.circuit());
        for (y, p) in dist.iter().enumerate() {
            prop_assert!((prepared.overlap(&runner.observable(y as u64)) - p).abs() < 1e-12);
        }
    }
}
