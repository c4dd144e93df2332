use serde::Serialize;

use super::density::{gate_unitary, DensityMatrix, Superop};
use crate::adders::{build, eval_classical, AdderSpec, Family, Inputs};
use crate::circuit::{decompose_toffoli, schedule_asap, Circuit, GateKind, GateOp};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::noise::{bitflip, KrausChannel, NoiseKind, NoiseModel, ReadoutModel, ToffoliPolicy};

/// Largest register simulated densely (CQA1 at n = 5).
pub const MAX_SIM_QUBITS: usize = 12;

type Bound = Vec<(Superop, Vec<usize>)>;

const KINDS: [GateKind; 6] = [
    GateKind::X,
    GateKind::Cnot,
    GateKind::Toffoli,
    GateKind::H,
    GateKind::T,
    GateKind::Tdg,
];

/// A circuit with its noise policy compiled to superoperators, reusable
/// across inputs.
pub struct NoisyRunner {
    circuit: Circuit,
    noise: NoiseModel,
    after_gate: Vec<(GateKind, Bound)>,
    after_gate_adjoint: Vec<(GateKind, Bound)>,
    after_prep: Bound,
    /// Forward and adjoint maps of the non-classical gates.
    unitaries: Vec<(GateKind, Superop, Superop)>,
    /// Forward and adjoint readout-window channel on each measured qubit.
    measure: Option<(Superop, Superop)>,
}

impl NoisyRunner {
    pub fn new(circuit: &Circuit, noise: &NoiseModel) -> Result<Self> {
        noise.validate()?;
        if circuit.num_qubits() > MAX_SIM_QUBITS {
            return Err(Error::QubitBudget {
                qubits: circuit.num_qubits(),
                limit: MAX_SIM_QUBITS,
            });
        }
        let circuit = match noise.toffoli_policy {
            ToffoliPolicy::Native => circuit.clone(),
            ToffoliPolicy::Decompose => decompose_toffoli(circuit),
        };
        let compile = |kind, prep, lift: fn(&KrausChannel) -> Superop| -> Result<Bound> {
            Ok(noise
                .gate_channels(kind, prep)?
                .iter()
                .map(|(ch, slots)| (lift(ch), slots.clone()))
                .collect())
        };
        let per_kind = |lift: fn(&KrausChannel) -> Superop| -> Result<Vec<(GateKind, Bound)>> {
            KINDS
                .iter()
                .map(|&k| Ok((k, compile(k, false, lift)?)))
                .collect()
        };
        let unitaries = [GateKind::H, GateKind::T, GateKind::Tdg]
            .into_iter()
            .map(|k| {
                let u = KrausChannel::unitary(gate_unitary(k).expect("single-qubit unitary"));
                (k, Superop::from_channel(&u), Superop::adjoint_of(&u))
            })
            .collect();
        Ok(Self {
            after_gate: per_kind(Superop::from_channel)?,
            after_gate_adjoint: per_kind(Superop::adjoint_of)?,
            after_prep: compile(GateKind::X, true, Superop::from_channel)?,
            measure: noise
                .measure_channel()?
                .map(|ch| (Superop::from_channel(&ch), Superop::adjoint_of(&ch))),
            circuit,
            noise: noise.clone(),
            unitaries,
        })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    fn bound(table: &[(GateKind, Bound)], kind: GateKind) -> &Bound {
        &table
            .iter()
            .find(|(k, _)| *k == kind)
            .expect("every kind is compiled")
            .1
    }

    fn apply(&self, rho: &mut DensityMatrix, gate: &GateOp, adjoint: bool) {
        match self.unitaries.iter().find(|(k, _, _)| *k == gate.kind()) {
            Some((_, fwd, adj)) => {
                rho.apply_superop(if adjoint { adj } else { fwd }, gate.qubits())
            }
            // X, CNOT and Toffoli are involutions
            None => rho.apply_gate(gate),
        }
    }

    fn attach(rho: &mut DensityMatrix, gate: &GateOp, bound: &Bound) {
        for (op, slots) in bound {
            let qubits: Vec<usize> = slots.iter().map(|&s| gate.qubits()[s]).collect();
            rho.apply_superop(op, &qubits);
        }
    }

    fn readout_window(&self, rho: &mut DensityMatrix, adjoint: bool) {
        if let Some((fwd, adj)) = &self.measure {
            for q in self.circuit.measured_qubits() {
                rho.apply_superop(if adjoint { adj } else { fwd }, &[q]);
            }
        }
    }

    fn idle(&self, rho: &mut DensityMatrix, qubit: usize, duration: f64) -> Result<()> {
        if let Some(ch) = self.noise.idle_channel(duration)? {
            rho.apply_channel(&ch, &[qubit]);
        }
        Ok(())
    }

    fn prep_gates(&self, start: usize) -> Vec<GateOp> {
        (0..self.circuit.num_qubits())
            .filter(|q| start >> q & 1 == 1)
            .map(GateOp::x)
            .collect()
    }

    /// The state after input loading only: noisy X gates on `|0...0>`,
    /// then any preparation errors of the readout model.
    pub fn prepare(&self, inputs: &Inputs) -> Result<DensityMatrix> {
        let start = inputs.basis_index(&self.circuit);
        let mut rho = DensityMatrix::from_index(self.circuit.num_qubits(), 0);
        for gate in self.prep_gates(start) {
            rho.apply_gate(&gate);
            Self::attach(&mut rho, &gate, &self.after_prep);
        }
        if let Some(readout) = &self.noise.readout {
            prep_errors(&mut rho, readout, start)?;
        }
        Ok(rho)
    }

    /// Prepares `|0...0>`, loads the inputs with X gates, then runs the
    /// circuit with channels attached after every gate.
    pub fn run(&self, inputs: &Inputs) -> Result<DensityMatrix> {
        if !self.noise.idle {
            let mut rho = self.prepare(inputs)?;
            for gate in self.circuit.gates() {
                self.apply(&mut rho, gate, false);
                Self::attach(&mut rho, gate, Self::bound(&self.after_gate, gate.kind()));
            }
            self.readout_window(&mut rho, false);
            return Ok(rho);
        }

        let nq = self.circuit.num_qubits();
        let start = inputs.basis_index(&self.circuit);
        let prep = self.prep_gates(start);
        let mut gates = prep.clone();
        gates.extend_from_slice(self.circuit.gates());
        let schedule = schedule_asap(
            &self.circuit.with_gates(gates),
            &self.noise.schedule_durations(),
        );
        let mut rho = DensityMatrix::from_index(nq, 0);
        let mut free_at = vec![0.0f64; nq];
        let mut step = 0usize;
        let mut run_gate = |rho: &mut DensityMatrix, gate: &GateOp, bound: &Bound| -> Result<()> {
            for &q in gate.qubits() {
                self.idle(rho, q, schedule.starts[step] - free_at[q])?;
                free_at[q] = schedule.end(step);
            }
            step += 1;
            self.apply(rho, gate, false);
            Self::attach(rho, gate, bound);
            Ok(())
        };
        for gate in &prep {
            run_gate(&mut rho, gate, &self.after_prep)?;
        }
        if let Some(readout) = &self.noise.readout {
            prep_errors(&mut rho, readout, start)?;
        }
        for gate in self.circuit.gates() {
            run_gate(&mut rho, gate, Self::bound(&self.after_gate, gate.kind()))?;
        }
        for (q, &t) in free_at.iter().enumerate() {
            self.idle(&mut rho, q, schedule.makespan - t)?;
        }
        self.readout_window(&mut rho, false);
        Ok(rho)
    }

    /// Pulls the projector onto measured value `outcome` back through the
    /// noisy circuit (not the preparation). `tr(prepare(x) * O)` is then the
    /// probability of `outcome` for input `x`. Undefined in idle mode, where
    /// the schedule depends on the input.
    pub fn observable(&self, outcome: u64) -> DensityMatrix {
        let nq = self.circuit.num_qubits();
        let measured = self.circuit.measured_qubits();
        let pops = (0..1usize << nq)
            .filter(|&z| measured_value(&measured, z) == outcome)
            .map(|z| (z, 1.0))
            .collect();
        let mut o = DensityMatrix::from_populations(nq, pops);
        self.readout_window(&mut o, true);
        for gate in self.circuit.gates().iter().rev() {
            for (op, slots) in Self::bound(&self.after_gate_adjoint, gate.kind())
                .iter()
                .rev()
            {
                let qubits: Vec<usize> = slots.iter().map(|&s| gate.qubits()[s]).collect();
                o.apply_superop(op, &qubits);
            }
            self.apply(&mut o, gate, true);
        }
        o
    }

    /// Distribution of the measured register (sum, then cout) for every
    /// input pair, indexed `a * 2^n + b` then by measured value. Without idle
    /// noise each outcome is pulled back through the circuit once and paired
    /// with every prepared input; otherwise each input is run forward.
    pub fn output_distributions(&self, n: usize, exec: Exec) -> Result<Vec<Vec<f64>>> {
        let side = 1usize << n;
        let inputs = |i: usize| Inputs::new((i / side) as u64, (i % side) as u64);
        let outcomes = 1usize << self.circuit.measured_qubits().len();
        if self.noise.idle {
            return exec
                .map(0..side * side, |i| {
                    Ok(output_distribution(&self.run(&inputs(i))?, &self.circuit))
                })
                .into_iter()
                .collect();
        }
        let observables = exec.map(0..outcomes, |y| self.observable(y as u64));
        exec.map(0..side * side, |i| {
            let rho = self.prepare(&inputs(i))?;
            Ok(observables.iter().map(|o| rho.overlap(o)).collect())
        })
        .into_iter()
        .collect()
    }
}

fn measured_value(measured: &[usize], index: usize) -> u64 {
    measured
        .iter()
        .enumerate()
        .map(|(bit, &q)| ((index >> q & 1) as u64) << bit)
        .sum()
}

fn prep_errors(rho: &mut DensityMatrix, readout: &ReadoutModel, start: usize) -> Result<()> {
    for q in 0..rho.num_qubits() {
        let p = readout.prep_flip(start >> q & 1 == 1);
        if p > 0.0 {
            rho.apply_channel(&bitflip(p)?, &[q]);
        }
    }
    Ok(())
}

pub fn run_noisy(circuit: &Circuit, noise: &NoiseModel, inputs: &Inputs) -> Result<DensityMatrix> {
    NoisyRunner::new(circuit, noise)?.run(inputs)
}

/// Marginal distribution of the measured register, indexed by its value.
pub fn output_distribution(rho: &DensityMatrix, circuit: &Circuit) -> Vec<f64> {
    let measured = circuit.measured_qubits();
    let mut dist = vec![0.0; 1 << measured.len()];
    for (index, p) in rho.probabilities() {
        dist[measured_value(&measured, index) as usize] += p;
    }
    dist
}

/// Probability of reporting `expected` given the true output distribution,
/// with an optional independent per-bit readout confusion.
fn reported(dist: &[f64], width: usize, expected: u64, readout: Option<&ReadoutModel>) -> f64 {
    match readout {
        None => dist[expected as usize],
        Some(r) => dist
            .iter()
            .enumerate()
            .map(|(y, &p)| {
                let w: f64 = (0..width)
                    .map(|bit| r.read(y >> bit & 1 == 1, expected >> bit & 1 == 1))
                    .product();
                p * w
            })
            .sum(),
    }
}

fn bit_error_rates(dist: &[f64], width: usize, expected: u64) -> Vec<f64> {
    (0..width)
        .map(|bit| {
            dist.iter()
                .enumerate()
                .filter(|&(y, _)| (y as u64 ^ expected) >> bit & 1 == 1)
                .map(|(_, p)| p)
                .sum()
        })
        .collect()
}

/// Probability that the measured register (sum, then cout) reads `expected`,
/// taken exactly from the populations. A readout model, if given, is applied
/// as an independent per-bit confusion matrix.
pub fn measured_success(
    rho: &DensityMatrix,
    circuit: &Circuit,
    expected: u64,
    readout: Option<&ReadoutModel>,
) -> f64 {
    let width = circuit.measured_qubits().len();
    reported(&output_distribution(rho, circuit), width, expected, readout)
}

/// Probability of reading the design's own noiseless output for `inputs`.
pub fn success_probability(rho: &DensityMatrix, spec: &AdderSpec, inputs: &Inputs) -> Result<f64> {
    let expected = eval_classical(spec, inputs.a, inputs.b, inputs.cin)?;
    Ok(measured_success(rho, &build(spec), expected, None))
}

/// Per measured bit, probability of reading the wrong value.
pub fn measured_bit_errors(rho: &DensityMatrix, circuit: &Circuit, expected: u64) -> Vec<f64> {
    let width = circuit.measured_qubits().len();
    bit_error_rates(&output_distribution(rho, circuit), width, expected)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityReport {
    pub family: Family,
    pub n: usize,
    pub noise: String,
    pub avg_success_probability: f64,
    /// Indexed by `a * 2^n + b`.
    pub per_input: Vec<f64>,
    /// Mean error probability of each measured bit (sum LSB first, then cout).
    pub bit_errors: Vec<f64>,
    pub toffoli_policy: ToffoliPolicy,
    pub idle_mode: bool,
    pub apply_to_prep: bool,
}

pub fn fidelity_sweep(spec: &AdderSpec, noise: &NoiseModel) -> Result<FidelityReport> {
    fidelity_sweep_with(spec, noise, Exec::default())
}

/// Runs every input pair (cin = 0) and averages the exact success
/// probabilities in input order.
pub fn fidelity_sweep_with(
    spec: &AdderSpec,
    noise: &NoiseModel,
    exec: Exec,
) -> Result<FidelityReport> {
    let circuit = build(spec);
    let runner = NoisyRunner::new(&circuit, noise)?;
    let width = circuit.measured_qubits().len();
    let side = 1u64 << spec.n();
    let dists = runner.output_distributions(spec.n(), exec)?;
    let mut per_input = Vec::with_capacity(dists.len());
    let mut bit_errors = vec![0.0; width];
    for (i, dist) in dists.iter().enumerate() {
        let i = i as u64;
        let expected = eval_classical(spec, i / side, i % side, 0)?;
        per_input.push(reported(dist, width, expected, noise.readout.as_ref()));
        for (acc, e) in bit_errors
            .iter_mut()
            .zip(bit_error_rates(dist, width, expected))
        {
            *acc += e;
        }
    }
    let count = per_input.len() as f64;
    bit_errors.iter_mut().for_each(|e| *e /= count);
    Ok(FidelityReport {
        family: spec.family(),
        n: spec.n(),
        noise: noise.name.clone(),
        avg_success_probability: per_input.iter().sum::<f64>() / count,
        per_input,
        bit_errors,
        toffoli_policy: noise.toffoli_policy,
        idle_mode: noise.idle,
        apply_to_prep: noise.apply_to_prep,
    })
}

/// Solves for the factor `s` at which the design's mean thermal fidelity
/// with durations `base.durations.scaled(s)` equals `target`, by bisection.
pub fn calibrate_duration_scale(spec: &AdderSpec, base: &NoiseModel, target: f64) -> Result<f64> {
    if base.kind != NoiseKind::Thermal {
        return Err(Error::Parameter("calibration needs a thermal model".into()));
    }
    let fidelity = |s: f64| -> Result<f64> {
        let model = NoiseModel {
            durations: base.durations.scaled(s),
            ..base.clone()
        };
        Ok(fidelity_sweep(spec, &model)?.avg_success_probability)
    };
    if !(0.0..1.0).contains(&target) || fidelity(0.0)? < target {
        return Err(Error::Parameter(format!(
            "target fidelity {target} unreachable"
        )));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while fidelity(hi)? > target {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Parameter(format!(
                "target fidelity {target} unreachable"
            )));
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if fidelity(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
