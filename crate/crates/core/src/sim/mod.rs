//! Exact density-matrix evolution of noisy adder circuits.

mod density;
mod run;

pub use density::{gate_unitary, DensityMatrix, Superop};
pub use run::{
    calibrate_duration_scale, fidelity_sweep, fidelity_sweep_with, measured_bit_errors,
    measured_success, output_distribution, run_noisy, success_probability, FidelityReport,
    NoisyRunner, MAX_SIM_QUBITS,
};
