//! Gate-level circuit IR.
//!
//! Qubit `k` corresponds to bit `k` of a computational basis index, so the
//! basis state `|q0 q1 ... q_{n-1}>` has index `sum(q_k << k)`.

mod qasm;
mod schedule;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use qasm::{export_qasm, import_qasm};
pub use schedule::{schedule_asap, GateDurations, Interval, Schedule};

/// Gate kinds. `H`, `T` and `Tdg` only appear after [`decompose_toffoli`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    X,
    Cnot,
    Toffoli,
    H,
    T,
    Tdg,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot => 2,
            GateKind::Toffoli => 3,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Cnot => "cx",
            GateKind::Toffoli => "ccx",
            GateKind::H => "h",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
        }
    }

    /// True for gates that permute computational basis states.
    pub fn is_classical(self) -> bool {
        matches!(self, GateKind::X | GateKind::Cnot | GateKind::Toffoli)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One gate instance. The last qubit is the target; any others are controls.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GateOp {
    kind: GateKind,
    qubits: Vec<usize>,
}

impl GateOp {
    pub fn new(kind: GateKind, qubits: &[usize]) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::Arity {
                kind: kind.name(),
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(Error::DuplicateQubit(*q));
            }
        }
        Ok(Self {
            kind,
            qubits: qubits.to_vec(),
        })
    }

    pub fn x(target: usize) -> Self {
        Self {
            kind: GateKind::X,
            qubits: vec![target],
        }
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        Self::new(GateKind::Cnot, &[control, target])
    }

    pub fn toffoli(c0: usize, c1: usize, target: usize) -> Result<Self> {
        Self::new(GateKind::Toffoli, &[c0, c1, target])
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn target(&self) -> usize {
        *self.qubits.last().expect("gates have at least one qubit")
    }

    pub fn controls(&self) -> &[usize] {
        &self.qubits[..self.qubits.len() - 1]
    }

    /// Image of a basis index under this gate, for classical gates.
    pub fn permute(&self, index: usize) -> Result<usize> {
        if !self.kind.is_classical() {
            return Err(Error::NotClassical(self.kind.name()));
        }
        let fire = self.controls().iter().all(|&c| index >> c & 1 == 1);
        Ok(if fire {
            index ^ (1 << self.target())
        } else {
            index
        })
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for q in &self.qubits {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

/// Named qubit roles of an adder layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    A,
    B,
    Cin,
    Cout,
    Ancilla,
    Sum,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::A => "a",
            Role::B => "b",
            Role::Cin => "cin",
            Role::Cout => "cout",
            Role::Ancilla => "anc",
            Role::Sum => "sum",
        }
    }

    /// Output roles designate measured qubits and may alias input registers.
    pub fn is_output(self) -> bool {
        matches!(self, Role::Sum | Role::Cout)
    }
}

pub type RoleMap = BTreeMap<Role, Vec<usize>>;

fn validate_roles(num_qubits: usize, roles: &RoleMap) -> Result<()> {
    let mut register_owner: Vec<Option<Role>> = vec![None; num_qubits];
    let mut output_owner: Vec<Option<Role>> = vec![None; num_qubits];
    for (&role, qubits) in roles {
        for &q in qubits {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    num_qubits,
                });
            }
            let owner = if role.is_output() {
                &mut output_owner[q]
            } else {
                &mut register_owner[q]
            };
            if let Some(prev) = owner.replace(role) {
                return Err(Error::Roles(format!(
                    "qubit {q} assigned to both `{}` and `{}`",
                    prev.name(),
                    role.name()
                )));
            }
        }
    }
    match roles.get(&Role::Sum) {
        Some(sum) if !sum.is_empty() => Ok(()),
        _ => Err(Error::Roles("sum role is required".into())),
    }
}

/// Per-kind gate counts and typed depths along the critical dependency path.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthProfile {
    pub cnot_depth: usize,
    pub toffoli_depth: usize,
    pub cnot_count: usize,
    pub toffoli_count: usize,
    pub x_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<GateOp>,
    roles: RoleMap,
}

impl Circuit {
    pub fn new(num_qubits: usize, roles: RoleMap) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::NoQubits);
        }
        validate_roles(num_qubits, &roles)?;
        Ok(Self {
            num_qubits,
            gates: Vec::new(),
            roles,
        })
    }

    pub fn append(&mut self, gate: GateOp) -> Result<()> {
        if let Some(&q) = gate.qubits().iter().find(|&&q| q >= self.num_qubits) {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                num_qubits: self.num_qubits,
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn with_gate(mut self, gate: GateOp) -> Result<Self> {
        self.append(gate)?;
        Ok(self)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn roles(&self) -> &RoleMap {
        &self.roles
    }

    pub fn role(&self, role: Role) -> &[usize] {
        self.roles.get(&role).map_or(&[], Vec::as_slice)
    }

    /// Measured register: sum qubits (LSB first) followed by cout, if any.
    pub fn measured_qubits(&self) -> Vec<usize> {
        let mut out = self.role(Role::Sum).to_vec();
        out.extend_from_slice(self.role(Role::Cout));
        out
    }

    /// Same roles and qubit count with a different gate list.
    pub(crate) fn with_gates(&self, gates: Vec<GateOp>) -> Self {
        Self {
            num_qubits: self.num_qubits,
            gates,
            roles: self.roles.clone(),
        }
    }

    /// Image of a basis index under the whole circuit.
    pub fn permute_basis(&self, index: usize) -> Result<usize> {
        self.gates.iter().try_fold(index, |acc, g| g.permute(acc))
    }

    pub fn depth_profile(&self) -> DepthProfile {
        depth_profile(self)
    }
}

/// Counts gates by kind and measures typed depths on the dependency DAG.
///
/// Two gates depend on each other iff they share a qubit; list order fixes
/// the direction. The critical path is the one maximising
/// `(toffolis, cnots)` lexicographically.
pub fn depth_profile(circuit: &Circuit) -> DepthProfile {
    let mut frontier = vec![(0usize, 0usize); circuit.num_qubits];
    let mut profile = DepthProfile::default();
    for gate in &circuit.gates {
        let (dt, dc) = match gate.kind {
            GateKind::Toffoli => {
                profile.toffoli_count += 1;
                (1, 0)
            }
            GateKind::Cnot => {
                profile.cnot_count += 1;
                (0, 1)
            }
            GateKind::X => {
                profile.x_count += 1;
                (0, 0)
            }
            _ => (0, 0),
        };
        let (t, c) = gate
            .qubits
            .iter()
            .map(|&q| frontier[q])
            .max()
            .unwrap_or_default();
        let next = (t + dt, c + dc);
        for &q in &gate.qubits {
            frontier[q] = next;
        }
    }
    let (t, c) = frontier.into_iter().max().unwrap_or_default();
    profile.toffoli_depth = t;
    profile.cnot_depth = c;
    profile
}

/// Replaces every Toffoli with the 6-CNOT Clifford+T network
/// (2 H, 4 T, 3 Tdg), which acts identically on basis states.
pub fn decompose_toffoli(circuit: &Circuit) -> Circuit {
    let mut gates = Vec::with_capacity(circuit.gates.len());
    for gate in &circuit.gates {
        if gate.kind != GateKind::Toffoli {
            gates.push(gate.clone());
            continue;
        }
        let (a, b, c) = (gate.qubits[0], gate.qubits[1], gate.qubits[2]);
        let one = |kind, q| GateOp {
            kind,
            qubits: vec![q],
        };
        let cx = |ctl, tgt| GateOp {
            kind: GateKind::Cnot,
            qubits: vec![ctl, tgt],
        };
        gates.extend([
            one(GateKind::H, c),
            cx(b, c),
            one(GateKind::Tdg, c),
            cx(a, c),
            one(GateKind::T, c),
            cx(b, c),
            one(GateKind::Tdg, c),
            cx(a, c),
            one(GateKind::T, b),
            one(GateKind::T, c),
            one(GateKind::H, c),
            cx(a, b),
            one(GateKind::T, a),
            one(GateKind::Tdg, b),
            cx(a, b),
        ]);
    }
    circuit.with_gates(gates)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roles(pairs: &[(Role, std::ops::Range<usize>)]) -> RoleMap {
        pairs
            .iter()
            .map(|(r, range)| (*r, range.clone().collect()))
            .collect()
    }

    #[test]
    fn empty_eight_qubit_circuit() {
        let c = Circuit::new(
            8,
            roles(&[(Role::A, 0..4), (Role::B, 4..8), (Role::Sum, 4..8)]),
        )
        .unwrap();
        assert_eq!(c.num_qubits(), 8);
        assert!(c.gates().is_empty());
        assert_eq!(c.role(Role::Sum), &[4, 5, 6, 7]);
    }

    #[test]
    fn ten_qubit_carry_layout() {
        let c = Circuit::new(
            10,
            roles(&[
                (Role::A, 0..4),
                (Role::B, 4..8),
                (Role::Sum, 4..8),
                (Role::Cin, 8..9),
                (Role::Cout, 9..10),
            ]),
        )
        .unwrap();
        assert_eq!(c.measured_qubits(), vec![4, 5, 6, 7, 9]);
    }

    #[test]
    fn rejects_degenerate_and_overlapping_roles() {
        assert_eq!(Circuit::new(0, RoleMap::new()), Err(Error::NoQubits));
        let overlap = roles(&[(Role::A, 0..3), (Role::B, 2..4), (Role::Sum, 2..4)]);
        assert!(matches!(Circuit::new(4, overlap), Err(Error::Roles(_))));
        let out_of_range = roles(&[(Role::A, 0..4), (Role::Sum, 0..4)]);
        assert!(matches!(
            Circuit::new(3, out_of_range),
            Err(Error::QubitOutOfRange { qubit: 3, .. })
        ));
        assert!(matches!(
            Circuit::new(2, roles(&[(Role::A, 0..2)])),
            Err(Error::Roles(_))
        ));
    }

    #[test]
    fn append_validates_gates() {
        let mut c = Circuit::new(
            10,
            roles(&[(Role::A, 0..4), (Role::B, 4..8), (Role::Sum, 4..8)]),
        )
        .unwrap();
        c.append(GateOp::cnot(0, 4).unwrap()).unwrap();
        assert_eq!(c.gates().len(), 1);
        c.append(GateOp::toffoli(0, 4, 8).unwrap()).unwrap();
        assert_eq!(c.gates().len(), 2);
        assert_eq!(GateOp::cnot(0, 0), Err(Error::DuplicateQubit(0)));
        assert!(matches!(
            GateOp::new(GateKind::Toffoli, &[0, 1]),
            Err(Error::Arity {
                expected: 3,
                got: 2,
                ..
            })
        ));
        assert!(c.append(GateOp::cnot(0, 10).unwrap()).is_err());
        assert_eq!(c.gates().len(), 2);
    }

    #[test]
    fn typed_depth_follows_the_toffoli_chain() {
        let mut c = Circuit::new(4, roles(&[(Role::Sum, 0..4)])).unwrap();
        c.append(GateOp::cnot(0, 1).unwrap()).unwrap();
        c.append(GateOp::cnot(1, 2).unwrap()).unwrap();
        c.append(GateOp::cnot(2, 3).unwrap()).unwrap();
        c.append(GateOp::toffoli(0, 1, 3).unwrap()).unwrap();
        let p = c.depth_profile();
        // path cx(0,1) -> cx(1,2) -> cx(2,3) -> ccx beats any other
        assert_eq!((p.toffoli_depth, p.cnot_depth), (1, 3));
        assert_eq!((p.toffoli_count, p.cnot_count), (1, 3));
    }

    #[test]
    fn toffoli_preferred_over_longer_cnot_path() {
        let mut c = Circuit::new(5, roles(&[(Role::Sum, 0..5)])).unwrap();
        for _ in 0..5 {
            c.append(GateOp::cnot(0, 1).unwrap()).unwrap();
        }
        c.append(GateOp::toffoli(2, 3, 4).unwrap()).unwrap();
        let p = c.depth_profile();
        assert_eq!((p.toffoli_depth, p.cnot_depth), (1, 0));
    }

    #[test]
    fn decomposition_sizes() {
        let mut c = Circuit::new(3, roles(&[(Role::Sum, 0..3)])).unwrap();
        c.append(GateOp::toffoli(0, 1, 2).unwrap()).unwrap();
        let d = decompose_toffoli(&c);
        let p = d.depth_profile();
        assert_eq!(p.toffoli_count, 0);
        assert_eq!(p.cnot_count, 6);
        assert_eq!(d.gates().len(), 15);

        let plain = Circuit::new(3, roles(&[(Role::Sum, 0..3)]))
            .unwrap()
            .with_gate(GateOp::cnot(0, 1).unwrap())
            .unwrap();
        assert_eq!(decompose_toffoli(&plain), plain);
    }

    #[test]
    fn classical_permutation() {
        let t = GateOp::toffoli(0, 1, 2).unwrap();
        assert_eq!(t.permute(0b011).unwrap(), 0b111);
        assert_eq!(t.permute(0b001).unwrap(), 0b001);
        let h = GateOp::new(GateKind::H, &[0]).unwrap();
        assert!(matches!(h.permute(0), Err(Error::NotClassical("h"))));
    }
}
