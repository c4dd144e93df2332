use serde::{Deserialize, Serialize};

use super::{decompose_toffoli, Circuit, GateKind, GateOp, Role, RoleMap};

/// Gate durations, in ticks or seconds depending on the caller.
/// `single` is the H gate and `phase` the T/Tdg gates introduced by
/// decomposition. `measure` is the readout window, not a scheduled gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GateDurations {
    pub x: f64,
    pub cnot: f64,
    pub toffoli: f64,
    pub single: f64,
    pub phase: f64,
    pub measure: f64,
}

impl GateDurations {
    /// Every gate takes `t`; measurement is instantaneous.
    pub fn uniform(t: f64) -> Self {
        Self {
            x: t,
            cnot: t,
            toffoli: t,
            single: t,
            phase: t,
            measure: 0.0,
        }
    }

    /// Typical superconducting-device timings in seconds: 50 ns H, 100 ns
    /// X, 300 ns CNOT, virtual (zero-time) phase gates and a 1 us readout.
    /// The Toffoli takes the makespan of its Clifford+T network.
    pub fn device() -> Self {
        let mut d = Self {
            x: 100e-9,
            cnot: 300e-9,
            toffoli: 0.0,
            single: 50e-9,
            phase: 0.0,
            measure: 1e-6,
        };
        let roles: RoleMap = [(Role::Sum, vec![2])].into_iter().collect();
        let ccx = Circuit::new(3, roles)
            .and_then(|c| c.with_gate(GateOp::toffoli(0, 1, 2)?))
            .expect("three-qubit toffoli");
        d.toffoli = schedule_asap(&decompose_toffoli(&ccx), &d).makespan;
        d
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            x: self.x * s,
            cnot: self.cnot * s,
            toffoli: self.toffoli * s,
            single: self.single * s,
            phase: self.phase * s,
            measure: self.measure * s,
        }
    }

    pub fn of(&self, kind: GateKind) -> f64 {
        match kind {
            GateKind::X => self.x,
            GateKind::Cnot => self.cnot,
            GateKind::Toffoli => self.toffoli,
            GateKind::H => self.single,
            GateKind::T | GateKind::Tdg => self.phase,
        }
    }
}

impl Default for GateDurations {
    fn default() -> Self {
        Self::uniform(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub starts: Vec<f64>,
    pub durations: Vec<f64>,
    pub busy: Vec<Vec<Interval>>,
    pub idle: Vec<Vec<Interval>>,
    pub makespan: f64,
}

impl Schedule {
    pub fn total_idle(&self, qubit: usize) -> f64 {
        self.idle[qubit].iter().map(Interval::len).sum()
    }

    pub fn end(&self, gate: usize) -> f64 {
        self.starts[gate] + self.durations[gate]
    }
}

/// As-soon-as-possible schedule: each gate starts once all its qubits are free.
/// Idle intervals cover `[0, makespan]` minus the busy intervals of each qubit.
pub fn schedule_asap(circuit: &Circuit, durations: &GateDurations) -> Schedule {
    let nq = circuit.num_qubits();
    let mut free_at = vec![0.0f64; nq];
    let mut busy: Vec<Vec<Interval>> = vec![Vec::new(); nq];
    let mut starts = Vec::with_capacity(circuit.gates().len());
    let mut lens = Vec::with_capacity(circuit.gates().len());
    for gate in circuit.gates() {
        let d = durations.of(gate.kind());
        debug_assert!(d >= 0.0, "gate durations must be nonnegative");
        let start = gate
            .qubits()
            .iter()
            .map(|&q| free_at[q])
            .fold(0.0, f64::max);
        for &q in gate.qubits() {
            free_at[q] = start + d;
            busy[q].push(Interval {
                start,
                end: start + d,
            });
        }
        starts.push(start);
        lens.push(d);
    }
    let makespan = free_at.iter().copied().fold(0.0, f64::max);
    let idle = busy
        .iter()
        .map(|intervals| {
            let mut gaps = Vec::new();
            let mut cursor = 0.0;
            for iv in intervals {
                if iv.start > cursor {
                    gaps.push(Interval {
                        start: cursor,
                        end: iv.start,
                    });
                }
                cursor = iv.end;
            }
            if makespan > cursor {
                gaps.push(Interval {
                    start: cursor,
                    end: makespan,
                });
            }
            gaps
        })
        .collect();
    Schedule {
        starts,
        durations: lens,
        busy,
        idle,
        makespan,
    }
}
