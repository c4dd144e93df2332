//! Generators and classical semantics for the exact and approximate adders.
//!
//! Every layout is `a = 0..n`, `b = n..2n`, then `cin` (exact Cuccaro
//! adders only), then a dedicated carry-out qubit where the design has one.
//! Any qubit outside the sum/cout outputs ends in its initial value.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateOp, Role, RoleMap};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Cqa0,
    Cqa1,
    Tpl13,
    Aqa1,
    Aqa2,
    Aqa3,
    Aqa4,
    Aqa5,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Cqa0,
        Family::Cqa1,
        Family::Tpl13,
        Family::Aqa1,
        Family::Aqa2,
        Family::Aqa3,
        Family::Aqa4,
        Family::Aqa5,
    ];
    pub const APPROXIMATE: [Family; 5] = [
        Family::Aqa1,
        Family::Aqa2,
        Family::Aqa3,
        Family::Aqa4,
        Family::Aqa5,
    ];
    pub const EXACT: [Family; 3] = [Family::Cqa0, Family::Cqa1, Family::Tpl13];

    pub fn name(self) -> &'static str {
        match self {
            Family::Cqa0 => "cqa0",
            Family::Cqa1 => "cqa1",
            Family::Tpl13 => "tpl13",
            Family::Aqa1 => "aqa1",
            Family::Aqa2 => "aqa2",
            Family::Aqa3 => "aqa3",
            Family::Aqa4 => "aqa4",
            Family::Aqa5 => "aqa5",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::Cqa0 => "CQA0",
            Family::Cqa1 => "CQA1",
            Family::Tpl13 => "TPL13",
            Family::Aqa1 => "AQA1",
            Family::Aqa2 => "AQA2",
            Family::Aqa3 => "AQA3",
            Family::Aqa4 => "AQA4",
            Family::Aqa5 => "AQA5",
        }
    }

    pub fn has_cout(self) -> bool {
        !matches!(self, Family::Cqa0 | Family::Aqa1 | Family::Aqa2)
    }

    pub fn has_cin(self) -> bool {
        matches!(self, Family::Cqa0 | Family::Cqa1)
    }

    pub fn is_exact(self) -> bool {
        Self::EXACT.contains(&self)
    }

    pub fn num_qubits(self, n: usize) -> usize {
        match self {
            Family::Cqa0 | Family::Tpl13 | Family::Aqa5 => 2 * n + 1,
            Family::Cqa1 => 2 * n + 2,
            Family::Aqa1 | Family::Aqa2 | Family::Aqa3 | Family::Aqa4 => 2 * n,
        }
    }
}

/// Closed-form design characteristics of a family at width `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DesignFormula {
    pub qubits: usize,
    pub cnot_depth: usize,
    pub toffoli_depth: usize,
    pub cnot_count: usize,
    pub toffoli_count: usize,
}

impl Family {
    pub fn design_formula(self, n: usize) -> DesignFormula {
        let (cnot_depth, toffoli_depth, cnot_count, toffoli_count) = match self {
            Family::Cqa0 => (3 * n + 1, 2 * n, 4 * n, 2 * n),
            Family::Cqa1 => (3 * n + 2, 2 * n, 4 * n + 1, 2 * n),
            Family::Tpl13 => (
                (3 * n).saturating_sub(2),
                (2 * n).saturating_sub(1),
                (5 * n).saturating_sub(5),
                (2 * n).saturating_sub(1),
            ),
            Family::Aqa1 | Family::Aqa3 => (0, 0, 0, 0),
            Family::Aqa2 | Family::Aqa4 => (1, 0, n, 0),
            Family::Aqa5 => (1, 1, n, 1),
        };
        DesignFormula {
            qubits: self.num_qubits(n),
            cnot_depth,
            toffoli_depth,
            cnot_count,
            toffoli_count,
        }
    }

    /// Symbolic form of [`Family::design_formula`]: qubits, CNOT depth,
    /// Toffoli depth, CNOT count, Toffoli count.
    pub fn design_formula_text(self) -> [&'static str; 5] {
        match self {
            Family::Cqa0 => ["2n+1", "3n+1", "2n", "4n", "2n"],
            Family::Cqa1 => ["2n+2", "3n+2", "2n", "4n+1", "2n"],
            Family::Tpl13 => ["2n+1", "3n-2", "2n-1", "5n-5", "2n-1"],
            Family::Aqa1 | Family::Aqa3 => ["2n", "0", "0", "0", "0"],
            Family::Aqa2 | Family::Aqa4 => ["2n", "1", "0", "n", "0"],
            Family::Aqa5 => ["2n+1", "1", "1", "n", "1"],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdderSpec {
    family: Family,
    n: usize,
}

impl AdderSpec {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BitWidth(n));
        }
        Ok(Self { family, n })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_cout(&self) -> bool {
        self.family.has_cout()
    }

    pub fn num_qubits(&self) -> usize {
        self.family.num_qubits(self.n)
    }

    pub fn build(&self) -> Circuit {
        build(self)
    }

    pub fn eval(&self, a: u64, b: u64, cin: u64) -> Result<u64> {
        eval_classical(self, a, b, cin)
    }

    fn a(&self, i: usize) -> usize {
        i
    }

    fn b(&self, i: usize) -> usize {
        self.n + i
    }

    fn cin(&self) -> usize {
        2 * self.n
    }
}

impl fmt::Display for AdderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={})", self.family, self.n)
    }
}

/// Basis-state assignment of the adder inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Inputs {
    pub a: u64,
    pub b: u64,
    pub cin: u64,
}

impl Inputs {
    pub fn new(a: u64, b: u64) -> Self {
        Self { a, b, cin: 0 }
    }

    /// Basis index with the inputs loaded into their registers.
    pub fn basis_index(&self, circuit: &Circuit) -> usize {
        let mut index = 0usize;
        for (role, value) in [(Role::A, self.a), (Role::B, self.b), (Role::Cin, self.cin)] {
            for (bit, &q) in circuit.role(role).iter().enumerate() {
                if value >> bit & 1 == 1 {
                    index |= 1 << q;
                }
            }
        }
        index
    }
}

/// Reads the measured register (sum then cout) of a basis index as an integer.
pub fn read_output(circuit: &Circuit, index: usize) -> u64 {
    circuit
        .measured_qubits()
        .iter()
        .enumerate()
        .map(|(bit, &q)| ((index >> q & 1) as u64) << bit)
        .sum()
}

fn push(c: &mut Circuit, gate: Result<GateOp>) {
    c.append(gate.expect("generator emits well-formed gates"))
        .expect("generator stays within its qubit budget");
}

fn cnot(c: &mut Circuit, ctl: usize, tgt: usize) {
    push(c, GateOp::cnot(ctl, tgt));
}

fn ccx(c: &mut Circuit, c0: usize, c1: usize, tgt: usize) {
    push(c, GateOp::toffoli(c0, c1, tgt));
}

/// Cuccaro MAJ block: `carry` and `b` become `carry^a` and `b^a`, `a` becomes
/// the majority.
fn maj(c: &mut Circuit, carry: usize, b: usize, a: usize) {
    cnot(c, a, b);
    cnot(c, a, carry);
    ccx(c, carry, b, a);
}

/// Two-CNOT UMA block: restores `carry` and `a`, leaves the sum bit on `b`.
fn uma(c: &mut Circuit, carry: usize, b: usize, a: usize) {
    ccx(c, carry, b, a);
    cnot(c, a, carry);
    cnot(c, carry, b);
}

fn cuccaro(spec: &AdderSpec, c: &mut Circuit, cout: Option<usize>) {
    let n = spec.n;
    let carry_line = |i: usize| if i == 0 { spec.cin() } else { spec.a(i - 1) };
    for i in 0..n {
        maj(c, carry_line(i), spec.b(i), spec.a(i));
    }
    if let Some(z) = cout {
        cnot(c, spec.a(n - 1), z);
    }
    for i in (0..n).rev() {
        uma(c, carry_line(i), spec.b(i), spec.a(i));
    }
}

/// In-place ripple-carry adder with carry-out and no carry-in or ancilla:
/// `b <- a + b mod 2^n`, `z <- z ^ carry`.
fn ripple_no_ancilla(spec: &AdderSpec, c: &mut Circuit, z: usize) {
    let n = spec.n;
    let a = |i: usize| if i == n { z } else { spec.a(i) };
    let b = |i: usize| spec.b(i);
    if n == 1 {
        ccx(c, a(0), b(0), z);
        cnot(c, a(0), b(0));
        return;
    }
    for i in 1..n {
        cnot(c, a(i), b(i));
    }
    for i in (1..n).rev() {
        cnot(c, a(i), a(i + 1));
    }
    for i in 0..n {
        ccx(c, a(i), b(i), a(i + 1));
    }
    for i in (1..n).rev() {
        cnot(c, a(i), b(i));
        ccx(c, a(i - 1), b(i - 1), a(i));
    }
    for i in 1..n - 1 {
        cnot(c, a(i), a(i + 1));
    }
    for i in 0..n {
        cnot(c, a(i), b(i));
    }
}

fn layout(spec: &AdderSpec) -> RoleMap {
    let n = spec.n;
    let a: Vec<usize> = (0..n).map(|i| spec.a(i)).collect();
    let b: Vec<usize> = (0..n).map(|i| spec.b(i)).collect();
    let mut roles = RoleMap::new();
    roles.insert(Role::A, a.clone());
    roles.insert(Role::B, b.clone());
    match spec.family {
        Family::Cqa0 => {
            roles.insert(Role::Cin, vec![spec.cin()]);
            roles.insert(Role::Sum, b);
        }
        Family::Cqa1 => {
            roles.insert(Role::Cin, vec![spec.cin()]);
            roles.insert(Role::Cout, vec![2 * n + 1]);
            roles.insert(Role::Sum, b);
        }
        Family::Tpl13 | Family::Aqa5 => {
            roles.insert(Role::Cout, vec![2 * n]);
            roles.insert(Role::Sum, b);
        }
        Family::Aqa1 => {
            roles.insert(Role::Sum, a);
        }
        Family::Aqa2 => {
            roles.insert(Role::Sum, b);
        }
        Family::Aqa3 => {
            roles.insert(Role::Sum, a);
            roles.insert(Role::Cout, vec![spec.b(n - 1)]);
        }
        Family::Aqa4 => {
            let mut sum = b[..n - 1].to_vec();
            sum.push(spec.a(n - 1));
            roles.insert(Role::Sum, sum);
            roles.insert(Role::Cout, vec![spec.b(n - 1)]);
        }
    }
    roles
}

pub fn build(spec: &AdderSpec) -> Circuit {
    let n = spec.n;
    let mut c = Circuit::new(spec.num_qubits(), layout(spec))
        .expect("adder layouts are valid by construction");
    match spec.family {
        Family::Cqa0 => cuccaro(spec, &mut c, None),
        Family::Cqa1 => cuccaro(spec, &mut c, Some(2 * n + 1)),
        Family::Tpl13 => ripple_no_ancilla(spec, &mut c, 2 * n),
        Family::Aqa1 | Family::Aqa3 => {}
        Family::Aqa2 => {
            for i in 0..n {
                cnot(&mut c, spec.a(i), spec.b(i));
            }
        }
        Family::Aqa4 => {
            for i in 0..n - 1 {
                cnot(&mut c, spec.a(i), spec.b(i));
            }
            // MSB sum lands on a_{n-1} so b_{n-1} survives as the carry.
            cnot(&mut c, spec.b(n - 1), spec.a(n - 1));
        }
        Family::Aqa5 => {
            ccx(&mut c, spec.a(n - 1), spec.b(n - 1), 2 * n);
            for i in 0..n {
                cnot(&mut c, spec.a(i), spec.b(i));
            }
        }
    }
    c
}

/// The design's noiseless output: sum value, plus `2^n * carry` for carry
/// designs.
pub fn eval_classical(spec: &AdderSpec, a: u64, b: u64, cin: u64) -> Result<u64> {
    let n = spec.n;
    let limit = 1u64 << n;
    for v in [a, b] {
        if v >= limit {
            return Err(Error::Operand { value: v, n });
        }
    }
    if cin > 1 {
        return Err(Error::Operand { value: cin, n: 1 });
    }
    if cin == 1 && !spec.family.has_cin() {
        return Err(Error::NoCarryIn(spec.family.label()));
    }
    let msb = |v: u64| v >> (n - 1) & 1;
    Ok(match spec.family {
        Family::Cqa0 => (a + b + cin) % limit,
        Family::Cqa1 | Family::Tpl13 => a + b + cin,
        Family::Aqa1 => a,
        Family::Aqa2 => a ^ b,
        Family::Aqa3 => a + limit * msb(b),
        Family::Aqa4 => (a ^ b) + limit * msb(b),
        Family::Aqa5 => (a ^ b) + limit * (msb(a) & msb(b)),
    })
}

/// Exhaustively checks the generated circuit against [`eval_classical`] and
/// that every non-output qubit is returned to its initial value.
pub fn verify_semantics(spec: &AdderSpec) -> bool {
    let circuit = build(spec);
    let limit = 1u64 << spec.n;
    let outputs = circuit.measured_qubits();
    let passthrough_mask: usize = (0..circuit.num_qubits())
        .filter(|q| !outputs.contains(q))
        .map(|q| 1usize << q)
        .sum();
    let cins: &[u64] = if spec.family.has_cin() { &[0, 1] } else { &[0] };
    for a in 0..limit {
        for b in 0..limit {
            for &cin in cins {
                let inputs = Inputs { a, b, cin };
                let start = inputs.basis_index(&circuit);
                let Ok(end) = circuit.permute_basis(start) else {
                    return false;
                };
                let Ok(expected) = eval_classical(spec, a, b, cin) else {
                    return false;
                };
                if read_output(&circuit, end) != expected
                    || (end & passthrough_mask) != (start & passthrough_mask)
                {
                    return false;
                }
            }
        }
    }
    true
}
