use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use aqa_core::metrics::MAX_METRICS_WIDTH;
use aqa_core::noise::{NoiseModel, ToffoliPolicy, BENCHMARK_PRESETS};
use aqa_core::Family;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Md,
    Plot,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Md => "md",
            Format::Plot => "dat",
        }
    }
}

/// One experiment: which designs, widths and noise models to run, and how
/// to report them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub families: Vec<Family>,
    pub n: Vec<usize>,
    /// Preset names or keys of `models`.
    pub noise: Vec<String>,
    /// Reference designs for improvement percentages.
    pub baselines: Vec<Family>,
    /// Overrides the policy of every noise model when set.
    pub toffoli_policy: Option<ToffoliPolicy>,
    /// Overrides idle noise of every noise model when set.
    pub idle: Option<bool>,
    pub formats: Vec<Format>,
    pub out: Option<PathBuf>,
    /// Reserved; exact simulation draws no random numbers.
    pub seed: Option<u64>,
    /// Custom noise models by name.
    pub models: BTreeMap<String, NoiseModel>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            families: Family::ALL.to_vec(),
            n: vec![4],
            noise: BENCHMARK_PRESETS.iter().map(|s| s.to_string()).collect(),
            baselines: Vec::new(),
            toffoli_policy: None,
            idle: None,
            formats: vec![Format::Csv],
            out: None,
            seed: None,
            models: BTreeMap::new(),
        }
    }
}

pub const PRESETS: [(&str, &str); 5] = [
    ("paper-table2", include_str!("../presets/paper-table2.toml")),
    ("paper-table3", include_str!("../presets/paper-table3.toml")),
    ("paper-table4", include_str!("../presets/paper-table4.toml")),
    ("paper-table5", include_str!("../presets/paper-table5.toml")),
    ("paper-fig4-6", include_str!("../presets/paper-fig4-6.toml")),
];

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn preset(name: &str) -> Result<Self> {
        let (_, text) = PRESETS.iter().find(|(n, _)| *n == name).ok_or_else(|| {
            let known: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
            CliError::Config(format!(
                "unknown preset `{name}` (known: {})",
                known.join(", ")
            ))
        })?;
        Self::from_toml(text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.families.is_empty() {
            return Err(CliError::Config("`families` is empty".into()));
        }
        if self.n.is_empty() {
            return Err(CliError::Config("`n` is empty".into()));
        }
        if let Some(&n) = self.n.iter().find(|&&n| n == 0) {
            return Err(CliError::Config(format!(
                "`n` entry {n} must be at least 1"
            )));
        }
        for name in &self.noise {
            self.model(name)?;
        }
        for (name, model) in &self.models {
            model
                .validate()
                .map_err(|e| CliError::Config(format!("model `{name}`: {e}")))?;
        }
        Ok(())
    }

    /// The noise model named `name` with the config's overrides applied.
    pub fn model(&self, name: &str) -> Result<NoiseModel> {
        let mut model = match self.models.get(name) {
            Some(m) => NoiseModel {
                name: name.to_string(),
                ..m.clone()
            },
            None => NoiseModel::preset(name)
                .map_err(|_| CliError::Config(format!("unknown noise model `{name}`")))?,
        };
        if let Some(policy) = self.toffoli_policy {
            model.toffoli_policy = policy;
        }
        if let Some(idle) = self.idle {
            model.idle = idle;
        }
        Ok(model)
    }

    pub fn metrics_widths(&self) -> Result<&[usize]> {
        match self.n.iter().find(|&&n| n > MAX_METRICS_WIDTH) {
            Some(n) => Err(CliError::Config(format!(
                "metrics width {n} exceeds {MAX_METRICS_WIDTH}"
            ))),
            None => Ok(&self.n),
        }
    }
}
