//! Kraus channels and the policy binding them to circuit gates.

mod channels;
mod model;

pub use channels::{
    amplitude_damping, bitflip, depolarizing, joint_bitflip, pauli, phase_damping,
    readout_spam_model, thermal, KrausChannel, Matrix, ReadoutModel,
};
pub use model::{
    NoiseKind, NoiseModel, PairFlip, SlotChannel, ToffoliPolicy, BENCHMARK_PRESETS,
    CALIBRATED_DURATION_SCALE, CALIBRATED_GATE_TIME, DEFAULT_T1, DEFAULT_T2, PRESET_NAMES,
};
