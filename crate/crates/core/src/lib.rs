//! Exact and approximate quantum ripple adders: circuit construction,
//! brute-force approximation-error metrics, Kraus noise channels and exact
//! density-matrix fidelity simulation.

pub mod adders;
pub mod circuit;
pub mod error;
pub mod exec;
pub mod metrics;
pub mod noise;
pub mod sim;

pub use adders::{
    build, eval_classical, verify_semantics, AdderSpec, DesignFormula, Family, Inputs,
};
pub use circuit::{Circuit, DepthProfile, GateKind, GateOp, Role};
pub use error::{Error, Result};
pub use exec::Exec;
pub use metrics::{compute_metrics, MetricsReport};
pub use noise::{KrausChannel, NoiseKind, NoiseModel, ToffoliPolicy};
pub use sim::{fidelity_sweep, run_noisy, DensityMatrix, FidelityReport};
