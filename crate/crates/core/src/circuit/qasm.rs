//! OpenQASM 2.0 interchange.
//!
//! Registers are emitted in the order `a`, `b`, `cin`, `cout`, `anc`; qubits
//! without an input role land in `anc`. Output roles that alias input
//! registers are carried in `// sum:` and `// cout:` annotation comments.

use std::fmt::Write as _;

use super::{Circuit, GateKind, GateOp, Role, RoleMap};
use crate::error::{Error, Result};

const REGISTER_ORDER: [Role; 4] = [Role::A, Role::B, Role::Cin, Role::Cout];

fn registers(circuit: &Circuit) -> Vec<(Role, Vec<usize>)> {
    let mut owned = vec![false; circuit.num_qubits()];
    let mut regs = Vec::new();
    for role in REGISTER_ORDER {
        let qubits: Vec<usize> = circuit
            .role(role)
            .iter()
            .copied()
            .filter(|&q| !owned[q])
            .collect();
        if qubits.is_empty() {
            continue;
        }
        for &q in &qubits {
            owned[q] = true;
        }
        regs.push((role, qubits));
    }
    let mut anc: Vec<usize> = circuit.role(Role::Ancilla).to_vec();
    for (q, _) in owned.iter().enumerate().filter(|(_, &o)| !o) {
        if !anc.contains(&q) {
            anc.push(q);
        }
    }
    if !anc.is_empty() {
        regs.push((Role::Ancilla, anc));
    }
    regs
}

pub fn export_qasm(circuit: &Circuit) -> String {
    let regs = registers(circuit);
    let mut label = vec![String::new(); circuit.num_qubits()];
    for (role, qubits) in &regs {
        for (i, &q) in qubits.iter().enumerate() {
            label[q] = format!("{}[{i}]", role.name());
        }
    }
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    for (role, qubits) in &regs {
        let _ = writeln!(out, "qreg {}[{}];", role.name(), qubits.len());
    }
    for role in [Role::Sum, Role::Cout] {
        let qubits = circuit.role(role);
        if !qubits.is_empty() {
            let names: Vec<&str> = qubits.iter().map(|&q| label[q].as_str()).collect();
            let _ = writeln!(out, "// {}: {}", role.name(), names.join(" "));
        }
    }
    for gate in circuit.gates() {
        let args: Vec<&str> = gate.qubits().iter().map(|&q| label[q].as_str()).collect();
        let _ = writeln!(out, "{} {};", gate.kind().name(), args.join(","));
    }
    out
}

struct Parser {
    regs: Vec<(String, usize, usize)>,
    num_qubits: usize,
}

impl Parser {
    fn qubit(&self, line: usize, text: &str) -> Result<usize> {
        let err = |msg: String| Error::Qasm { line, msg };
        let text = text.trim();
        let (name, rest) = text
            .split_once('[')
            .ok_or_else(|| err(format!("expected `reg[i]`, found `{text}`")))?;
        let idx: usize = rest
            .strip_suffix(']')
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| err(format!("bad qubit index in `{text}`")))?;
        let (_, offset, size) = self
            .regs
            .iter()
            .find(|(n, _, _)| n == name.trim())
            .ok_or_else(|| err(format!("undeclared register `{}`", name.trim())))?;
        if idx >= *size {
            return Err(err(format!("index {idx} out of range for `{text}`")));
        }
        Ok(offset + idx)
    }
}

fn role_of_register(name: &str) -> Role {
    match name {
        "a" => Role::A,
        "b" => Role::B,
        "cin" => Role::Cin,
        "cout" => Role::Cout,
        _ => Role::Ancilla,
    }
}

pub fn import_qasm(text: &str) -> Result<Circuit> {
    let mut parser = Parser {
        regs: Vec::new(),
        num_qubits: 0,
    };
    let mut roles = RoleMap::new();
    let mut annotations: Vec<(usize, Role, String)> = Vec::new();
    let mut gates: Vec<(usize, GateKind, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix("//") {
            if let Some((key, value)) = comment.split_once(':') {
                match key.trim() {
                    "sum" => annotations.push((line, Role::Sum, value.to_string())),
                    "cout" => annotations.push((line, Role::Cout, value.to_string())),
                    _ => {}
                }
            }
            continue;
        }
        let stmt = trimmed.split("//").next().unwrap_or("").trim();
        if stmt.is_empty() {
            continue;
        }
        let stmt = stmt.strip_suffix(';').ok_or_else(|| Error::Qasm {
            line,
            msg: "missing `;`".into(),
        })?;
        let (head, rest) = stmt.split_once(char::is_whitespace).unwrap_or((stmt, ""));
        match head {
            "OPENQASM" | "include" | "creg" | "barrier" | "measure" => {}
            "qreg" => {
                let (name, size) = rest
                    .trim()
                    .strip_suffix(']')
                    .and_then(|s| s.split_once('['))
                    .and_then(|(n, s)| {
                        Some((n.trim().to_string(), s.trim().parse::<usize>().ok()?))
                    })
                    .ok_or_else(|| Error::Qasm {
                        line,
                        msg: format!("bad register declaration `{rest}`"),
                    })?;
                let role = role_of_register(&name);
                roles
                    .entry(role)
                    .or_default()
                    .extend(parser.num_qubits..parser.num_qubits + size);
                parser.regs.push((name, parser.num_qubits, size));
                parser.num_qubits += size;
            }
            other => {
                let kind = match other {
                    "x" => GateKind::X,
                    "cx" | "CX" => GateKind::Cnot,
                    "ccx" => GateKind::Toffoli,
                    "h" => GateKind::H,
                    "t" => GateKind::T,
                    "tdg" => GateKind::Tdg,
                    _ => {
                        return Err(Error::Qasm {
                            line,
                            msg: format!("unsupported statement `{other}`"),
                        })
                    }
                };
                gates.push((line, kind, rest.to_string()));
            }
        }
    }

    let dedicated_cout = roles.remove(&Role::Cout);
    for (line, role, value) in annotations {
        let qubits = value
            .split_whitespace()
            .map(|t| parser.qubit(line, t))
            .collect::<Result<Vec<_>>>()?;
        roles.insert(role, qubits);
    }
    if let Some(cout) = dedicated_cout {
        roles.entry(Role::Cout).or_insert(cout);
    }
    if !roles.contains_key(&Role::Sum) {
        let fallback = roles
            .get(&Role::B)
            .cloned()
            .unwrap_or_else(|| (0..parser.num_qubits).collect());
        roles.insert(Role::Sum, fallback);
    }

    let mut circuit = Circuit::new(parser.num_qubits, roles).map_err(|e| Error::Qasm {
        line: 0,
        msg: e.to_string(),
    })?;
    for (line, kind, args) in gates {
        let qubits = args
            .split(',')
            .map(|t| parser.qubit(line, t))
            .collect::<Result<Vec<_>>>()?;
        let gate = GateOp::new(kind, &qubits)
            .and_then(|g| circuit.append(g))
            .map_err(|e| Error::Qasm {
                line,
                msg: e.to_string(),
            });
        gate?;
    }
    Ok(circuit)
}
