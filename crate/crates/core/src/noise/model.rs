use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::channels::{
    amplitude_damping, bitflip, depolarizing, joint_bitflip, phase_damping, thermal, KrausChannel,
    ReadoutModel,
};
use crate::circuit::{GateDurations, GateKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    None,
    Thermal,
    Depolarizing,
    AmplitudeDamping,
    PhaseDamping,
    Bitflip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ToffoliPolicy {
    /// One gate; the two-qubit channel hits both control-target pairs.
    Native,
    /// Decompose into the Clifford+T network, then attach per-gate noise.
    #[default]
    Decompose,
}

impl fmt::Display for ToffoliPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ToffoliPolicy::Native => "native",
            ToffoliPolicy::Decompose => "decompose",
        })
    }
}

impl FromStr for ToffoliPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "native" => Ok(ToffoliPolicy::Native),
            "decompose" => Ok(ToffoliPolicy::Decompose),
            _ => Err(Error::Parameter(format!("unknown toffoli policy `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PairFlip {
    /// Each touched qubit flips on its own.
    #[default]
    Independent,
    /// Both qubits flip together.
    Joint,
}

/// Relaxation times used by the shipped thermal preset, in seconds.
pub const DEFAULT_T1: f64 = 50e-6;
pub const DEFAULT_T2: f64 = 70e-6;

/// Scale on [`GateDurations::device`] solving mean fidelity 0.951 for the
/// 4-bit pass-through adder without carry under thermal noise with
/// T1 = 50us, T2 = 70us.
pub const CALIBRATED_DURATION_SCALE: f64 = 1.149_108_1;

/// The same calibration with one uniform gate time and instantaneous
/// readout.
pub const CALIBRATED_GATE_TIME: f64 = 1.264_018_9e-6;

pub const PRESET_NAMES: [&str; 8] = [
    "none",
    "thermal",
    "depolarizing",
    "phase",
    "amplitude",
    "bitflip",
    "spam",
    "readout",
];

/// Presets compared in the benchmark tables. SPAM and readout act on every
/// design the same way and are left out.
pub const BENCHMARK_PRESETS: [&str; 5] =
    ["thermal", "depolarizing", "phase", "amplitude", "bitflip"];

/// Binds channels to gates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseModel {
    pub name: String,
    pub kind: NoiseKind,
    /// Parameter of the channel after 1-qubit gates (p, gamma or lambda).
    pub p1: f64,
    /// Parameter after 2-qubit gates; damping channels then act on each
    /// touched qubit independently.
    pub p2: f64,
    pub t1: f64,
    pub t2: f64,
    /// Gate durations in seconds, used by thermal noise.
    pub durations: GateDurations,
    pub apply_to_prep: bool,
    pub toffoli_policy: ToffoliPolicy,
    pub idle: bool,
    pub pair_flip: PairFlip,
    pub readout: Option<ReadoutModel>,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            name: "none".into(),
            kind: NoiseKind::None,
            p1: 0.0,
            p2: 0.0,
            t1: DEFAULT_T1,
            t2: DEFAULT_T2,
            durations: GateDurations::device().scaled(CALIBRATED_DURATION_SCALE),
            apply_to_prep: true,
            toffoli_policy: ToffoliPolicy::Decompose,
            idle: false,
            pair_flip: PairFlip::Independent,
            readout: None,
        }
    }
}

/// A channel and the gate-qubit slots it acts on.
pub type SlotChannel = (KrausChannel, Vec<usize>);

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn preset(name: &str) -> Result<Self> {
        let base = Self {
            name: name.to_string(),
            ..Self::default()
        };
        let model = match name {
            "none" => base,
            "thermal" => Self {
                kind: NoiseKind::Thermal,
                ..base
            },
            "depolarizing" => Self {
                kind: NoiseKind::Depolarizing,
                p1: 0.005,
                p2: 0.01,
                ..base
            },
            "amplitude" => Self {
                kind: NoiseKind::AmplitudeDamping,
                p1: 0.01,
                ..base
            },
            "phase" => Self {
                kind: NoiseKind::PhaseDamping,
                p1: 0.01,
                ..base
            },
            "bitflip" => Self {
                kind: NoiseKind::Bitflip,
                p1: 0.01,
                p2: 0.01,
                ..base
            },
            "spam" => Self {
                readout: Some(ReadoutModel {
                    p_meas_1_given_0: 0.1,
                    p_meas_0_given_1: 0.1,
                    p_prep_1_given_0: 0.02,
                    p_prep_0_given_1: 0.04,
                }),
                ..base
            },
            "readout" => Self {
                readout: Some(ReadoutModel {
                    p_meas_1_given_0: 0.05,
                    p_meas_0_given_1: 0.1,
                    ..ReadoutModel::default()
                }),
                ..base
            },
            _ => return Err(Error::Parameter(format!("unknown noise preset `{name}`"))),
        };
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        for (label, p) in [("p1", self.p1), ("p2", self.p2)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Parameter(format!("{label} = {p} not in [0, 1]")));
            }
        }
        if self.kind == NoiseKind::Thermal {
            thermal(self.t1, self.t2, 0.0)?;
            let d = self.durations;
            if [d.x, d.cnot, d.toffoli, d.single, d.phase, d.measure]
                .iter()
                .any(|&t| !(t >= 0.0 && t.is_finite()))
            {
                return Err(Error::Parameter(
                    "thermal durations must be finite and nonnegative".into(),
                ));
            }
        }
        if let Some(r) = &self.readout {
            r.validate()?;
        }
        Ok(())
    }

    fn single(&self, p: f64) -> Result<Option<KrausChannel>> {
        let ch = match self.kind {
            NoiseKind::None => return Ok(None),
            NoiseKind::Depolarizing => depolarizing(p, 1)?,
            NoiseKind::AmplitudeDamping => amplitude_damping(p)?,
            NoiseKind::PhaseDamping => phase_damping(p)?,
            NoiseKind::Bitflip => bitflip(p)?,
            NoiseKind::Thermal => unreachable!("thermal channels depend on duration"),
        };
        Ok((p > 0.0).then_some(ch))
    }

    fn pair(&self, slots: [usize; 2]) -> Result<Vec<SlotChannel>> {
        let p = self.p2;
        if p == 0.0 {
            return Ok(Vec::new());
        }
        Ok(match (self.kind, self.pair_flip) {
            (NoiseKind::Depolarizing, _) => vec![(depolarizing(p, 2)?, slots.to_vec())],
            (NoiseKind::Bitflip, PairFlip::Joint) => vec![(joint_bitflip(p)?, slots.to_vec())],
            _ => {
                let ch = self.single(p)?.expect("p2 > 0");
                slots.iter().map(|&s| (ch.clone(), vec![s])).collect()
            }
        })
    }

    /// Channels applied after a gate of `kind`. Slots index into the gate's
    /// qubit list.
    pub fn gate_channels(&self, kind: GateKind, is_prep: bool) -> Result<Vec<SlotChannel>> {
        if self.kind == NoiseKind::None || (is_prep && !self.apply_to_prep) {
            return Ok(Vec::new());
        }
        let arity = kind.arity();
        if self.kind == NoiseKind::Thermal {
            let t = self.durations.of(kind);
            if t == 0.0 {
                return Ok(Vec::new());
            }
            let ch = thermal(self.t1, self.t2, t)?;
            return Ok((0..arity).map(|s| (ch.clone(), vec![s])).collect());
        }
        match arity {
            1 => Ok(self
                .single(self.p1)?
                .map(|ch| (ch, vec![0]))
                .into_iter()
                .collect()),
            2 => self.pair([0, 1]),
            _ => {
                let mut out = self.pair([0, 2])?;
                out.extend(self.pair([1, 2])?);
                Ok(out)
            }
        }
    }

    /// Channel on each measured qubit during readout.
    pub fn measure_channel(&self) -> Result<Option<KrausChannel>> {
        match self.kind {
            NoiseKind::Thermal if self.durations.measure > 0.0 => {
                thermal(self.t1, self.t2, self.durations.measure).map(Some)
            }
            _ => Ok(None),
        }
    }

    /// Durations used to schedule idle windows: seconds for thermal noise,
    /// unit ticks otherwise.
    pub fn schedule_durations(&self) -> GateDurations {
        match self.kind {
            NoiseKind::Thermal => self.durations,
            _ => GateDurations::default(),
        }
    }

    /// Channel for an idle window of the given length, if this model decays
    /// idle qubits.
    pub fn idle_channel(&self, duration: f64) -> Result<Option<KrausChannel>> {
        if duration <= 0.0 {
            return Ok(None);
        }
        match self.kind {
            NoiseKind::Thermal => thermal(self.t1, self.t2, duration).map(Some),
            NoiseKind::AmplitudeDamping if self.p1 > 0.0 => {
                amplitude_damping(1.0 - (1.0 - self.p1).powf(duration)).map(Some)
            }
            _ => Ok(None),
        }
    }
}
