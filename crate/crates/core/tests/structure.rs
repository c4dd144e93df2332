use aqa_core::adders::{build, read_output, AdderSpec, Family, Inputs};
use aqa_core::circuit::{
    decompose_toffoli, export_qasm, import_qasm, schedule_asap, Circuit, GateDurations, GateKind,
    GateOp, Role,
};
use aqa_core::sim::DensityMatrix;
use aqa_core::verify_semantics;
use proptest::prelude::*;

/// Output word (sum bits, then cout at bit n) straight from the arithmetic
/// definition of each design.
fn reference(family: Family, n: usize, a: u64, b: u64, cin: u64) -> u64 {
    let mask = (1u64 << n) - 1;
    let msb = |x: u64| x >> (n - 1) & 1;
    match family {
        Family::Cqa0 => (a + b + cin) & mask,
        Family::Cqa1 | Family::Tpl13 => a + b + cin,
        Family::Aqa1 => a,
        Family::Aqa2 => a ^ b,
        Family::Aqa3 => a | msb(b) << n,
        Family::Aqa4 => (a ^ b) | msb(b) << n,
        Family::Aqa5 => (a ^ b) | (msb(a) & msb(b)) << n,
    }
}

fn simulate(circuit: &Circuit, inputs: Inputs) -> u64 {
    let end = circuit.permute_basis(inputs.basis_index(circuit)).unwrap();
    read_output(circuit, end)
}

#[test]
fn design_formulas_hold_for_widths_one_to_eight() {
    for family in Family::ALL {
        for n in 1..=8usize {
            let c = build(&AdderSpec::new(family, n).unwrap());
            let p = c.depth_profile();
            let got = (
                c.num_qubits(),
                p.cnot_depth,
                p.toffoli_depth,
                p.cnot_count,
                p.toffoli_count,
            );
            let want = match family {
                Family::Cqa0 => (2 * n + 1, 3 * n + 1, 2 * n, 4 * n, 2 * n),
                Family::Cqa1 => (2 * n + 2, 3 * n + 2, 2 * n, 4 * n + 1, 2 * n),
                Family::Tpl13 if n == 1 => continue,
                Family::Tpl13 => (2 * n + 1, 3 * n - 2, 2 * n - 1, 5 * n - 5, 2 * n - 1),
                Family::Aqa1 | Family::Aqa3 => (2 * n, 0, 0, 0, 0),
                Family::Aqa2 | Family::Aqa4 => (2 * n, 1, 0, n, 0),
                Family::Aqa5 => (2 * n + 1, 1, 1, n, 1),
            };
            assert_eq!(got, want, "{family} n={n}");
            let f = family.design_formula(n);
            assert_eq!(
                (
                    f.qubits,
                    f.cnot_depth,
                    f.toffoli_depth,
                    f.cnot_count,
                    f.toffoli_count
                ),
                want
            );
            assert_eq!(p.x_count, 0);
        }
    }
}

#[test]
fn single_bit_ripple_without_ancilla_needs_one_cnot() {
    // a 1-bit sum with carry cannot be formed by one Toffoli alone
    let p = build(&AdderSpec::new(Family::Tpl13, 1).unwrap()).depth_profile();
    assert_eq!((p.cnot_count, p.toffoli_count), (1, 1));
}

#[test]
fn every_family_matches_its_arithmetic_definition() {
    for family in Family::ALL {
        for n in 1..=4usize {
            let spec = AdderSpec::new(family, n).unwrap();
            assert!(verify_semantics(&spec), "{family} n={n}");
            let c = build(&spec);
            let cins: &[u64] = if family.has_cin() { &[0, 1] } else { &[0] };
            for a in 0..1u64 << n {
                for b in 0..1u64 << n {
                    for &cin in cins {
                        let got = simulate(&c, Inputs { a, b, cin });
                        assert_eq!(
                            got,
                            reference(family, n, a, b, cin),
                            "{family} n={n} a={a} b={b}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn carry_variants_agree() {
    for n in 1..=5usize {
        let cqa0 = build(&AdderSpec::new(Family::Cqa0, n).unwrap());
        let cqa1 = build(&AdderSpec::new(Family::Cqa1, n).unwrap());
        let tpl13 = build(&AdderSpec::new(Family::Tpl13, n).unwrap());
        for a in 0..1u64 << n {
            for b in 0..1u64 << n {
                let full = simulate(&cqa1, Inputs::new(a, b));
                assert_eq!(full % (1 << n), simulate(&cqa0, Inputs::new(a, b)));
                assert_eq!(full, simulate(&tpl13, Inputs::new(a, b)));
            }
        }
    }
}

#[test]
fn pass_through_designs_have_no_gates() {
    for family in [Family::Aqa1, Family::Aqa3] {
        let c = build(&AdderSpec::new(family, 4).unwrap());
        assert!(c.gates().is_empty());
        assert_eq!(c.role(Role::Sum), &[0, 1, 2, 3]);
    }
}

#[test]
fn toffoli_decomposition_preserves_every_basis_state() {
    // exhaustive over all Toffoli placements on up to 6 qubits, checked by
    // evolving basis projectors through the Clifford+T network
    for nq in 3..=6usize {
        for c0 in 0..nq {
            for c1 in 0..nq {
                for t in 0..nq {
                    let Ok(g) = GateOp::toffoli(c0, c1, t) else {
                        continue;
                    };
                    let roles = [(Role::Sum, (0..nq).collect())].into_iter().collect();
                    let c = Circuit::new(nq, roles).unwrap().with_gate(g).unwrap();
                    let d = decompose_toffoli(&c);
                    let p = d.depth_profile();
                    assert_eq!((p.cnot_count, p.toffoli_count), (6, 0));
                    let counts = |k| d.gates().iter().filter(|g| g.kind() == k).count();
                    assert_eq!(
                        (
                            counts(GateKind::H),
                            counts(GateKind::T),
                            counts(GateKind::Tdg)
                        ),
                        (2, 4, 3)
                    );
                    for i in 0..1usize << nq {
                        let mut rho = DensityMatrix::from_index(nq, i);
                        for g in d.gates() {
                            rho.apply_gate(g);
                        }
                        let want = c.permute_basis(i).unwrap();
                        assert!((rho.entry(want, want).re - 1.0).abs() < 1e-12);
                        assert!((rho.trace().re - 1.0).abs() < 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn decomposed_adders_compute_the_same_sums() {
    for family in Family::EXACT {
        let c = build(&AdderSpec::new(family, 2).unwrap());
        let d = decompose_toffoli(&c);
        for i in 0..1usize << c.num_qubits() {
            let mut rho = DensityMatrix::from_index(c.num_qubits(), i);
            for g in d.gates() {
                rho.apply_gate(g);
            }
            let want = c.permute_basis(i).unwrap();
            assert!(
                (rho.entry(want, want).re - 1.0).abs() < 1e-12,
                "{family} {i}"
            );
        }
    }
}

#[test]
fn schedule_makespans() {
    let ticks = GateDurations::default();
    for (family, want) in [
        (Family::Aqa1, 0.0),
        (Family::Aqa3, 0.0),
        (Family::Aqa2, 1.0),
        (Family::Aqa4, 1.0),
    ] {
        let s = schedule_asap(&build(&AdderSpec::new(family, 4).unwrap()), &ticks);
        assert_eq!(s.makespan, want, "{family}");
    }
    let d = GateDurations {
        cnot: 3.0,
        ..GateDurations::default()
    };
    let s = schedule_asap(&build(&AdderSpec::new(Family::Aqa2, 4).unwrap()), &d);
    assert_eq!(s.makespan, 3.0);
}

#[test]
fn ripple_adder_schedule() {
    let c = build(&AdderSpec::new(Family::Cqa0, 4).unwrap());
    let s = schedule_asap(&c, &GateDurations::default());
    // every MAJ opens with an independent CNOT, then the carry ripples
    assert_eq!(s.makespan, 21.0);
    let sum = c.role(Role::Sum);
    assert_eq!(s.idle[sum[0]][1].len(), 15.0);
    for q in 0..c.num_qubits() {
        for w in s.busy[q].windows(2) {
            assert!(w[0].end <= w[1].start);
        }
    }
}

#[test]
fn qasm_round_trip_for_every_family() {
    for family in Family::ALL {
        let c = build(&AdderSpec::new(family, 3).unwrap());
        let text = export_qasm(&c);
        let back = import_qasm(&text).unwrap();
        assert_eq!(back.num_qubits(), c.num_qubits(), "{family}");
        assert_eq!(back.role(Role::Sum), c.role(Role::Sum), "{family}");
        assert_eq!(back.role(Role::Cout), c.role(Role::Cout), "{family}");
        for i in 0..1usize << c.num_qubits() {
            assert_eq!(back.permute_basis(i).unwrap(), c.permute_basis(i).unwrap());
        }
        assert_eq!(export_qasm(&back), text);
    }
}

fn gate_strategy(nq: usize) -> impl Strategy<Value = GateOp> {
    (0..3usize, 0..nq, 0..nq, 0..nq).prop_filter_map("distinct qubits", |(k, a, b, c)| match k {
        0 => Some(GateOp::x(a)),
        1 => GateOp::cnot(a, b).ok(),
        _ => GateOp::toffoli(a, b, c).ok(),
    })
}

fn random_circuit(nq: usize, gates: Vec<GateOp>) -> Circuit {
    let roles = [(Role::Sum, (0..nq).collect())].into_iter().collect();
    let mut c = Circuit::new(nq, roles).unwrap();
    for g in gates {
        c.append(g).unwrap();
    }
    c
}

proptest! {
    #[test]
    fn depth_is_invariant_under_disjoint_insertions(
        gates in prop::collection::vec(gate_strategy(5), 0..20),
        extra in prop::collection::vec((0..3usize, 0..20usize), 0..6),
    ) {
        // circuits on qubits 0..5; padding gates live on qubits 5..8
        let base = random_circuit(8, gates.clone());
        let mut padded = gates;
        let mut pad_only = Vec::new();
        for (kind, pos) in extra {
            let g = match kind {
                0 => GateOp::x(5),
                1 => GateOp::cnot(6, 7).unwrap(),
                _ => GateOp::toffoli(5, 6, 7).unwrap(),
            };
            pad_only.push(g.clone());
            let at = pos.min(padded.len());
            padded.insert(at, g);
        }
        let key = |c: &Circuit| {
            let p = c.depth_profile();
            (p.toffoli_depth, p.cnot_depth)
        };
        let padded = random_circuit(8, padded);
        let pad = random_circuit(8, pad_only);
        prop_assert_eq!(key(&padded), key(&base).max(key(&pad)));
        let p = base.depth_profile();
        prop_assert!(p.cnot_count >= p.cnot_depth && p.toffoli_count >= p.toffoli_depth);
    }

    #[test]
    fn qasm_round_trip_random(gates in prop::collection::vec(gate_strategy(6), 0..30)) {
        let c = random_circuit(6, gates);
        let back = import_qasm(&export_qasm(&c)).unwrap();
        prop_assert_eq!(back.gates(), c.gates());
    }

    #[test]
    fn schedule_intervals_never_overlap(gates in prop::collection::vec(gate_strategy(5), 0..25)) {
        let c = random_circuit(5, gates);
        let s = schedule_asap(&c, &GateDurations { cnot: 2.0, toffoli: 3.0, ..GateDurations::default() });
        for q in 0..5 {
            for w in s.busy[q].windows(2) {
                prop_assert!(w[0].end <= w[1].start);
            }
            let busy: f64 = s.busy[q].iter().map(|i| i.len()).sum();
            prop_assert!((busy + s.total_idle(q) - s.makespan).abs() < 1e-12);
        }
        for (i, g) in c.gates().iter().enumerate() {
            for &q in g.qubits() {
                prop_assert!(s.busy[q].iter().any(|iv| iv.start == s.starts[i] && iv.end == s.end(i)));
            }
        }
    }
}
