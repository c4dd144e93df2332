use std::io::Write;
use std::path::{Path, PathBuf};

use aqa_core::adders::{build, AdderSpec};
use aqa_core::circuit::export_qasm;
use aqa_core::noise::ToffoliPolicy;
use aqa_core::Family;
use clap::{Parser, Subcommand, ValueEnum};

use crate::commands;
use crate::config::{ExperimentConfig, Format};
use crate::error::Result;
use crate::report::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Parser)]
#[command(name = "aqa", version, about = "Approximate quantum adder benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML experiment file.
    #[arg(long, global = true, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Named experiment (paper-table2..5, paper-fig4-6).
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Write reports into this directory instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output views; csv is canonical.
    #[arg(long, global = true, value_enum)]
    pub format: Vec<Format>,
    /// native | decompose, applied to every noise model.
    #[arg(long, global = true)]
    pub toffoli_policy: Option<ToffoliPolicy>,
    /// Relaxation of waiting qubits between gates.
    #[arg(long, global = true, value_enum)]
    pub idle: Option<Switch>,
    /// Reserved; simulation is exact.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Comma-separated designs, e.g. cqa1,aqa3.
    #[arg(long, global = true, value_delimiter = ',')]
    pub families: Vec<Family>,
    /// Comma-separated bit widths.
    #[arg(long = "n", global = true, value_delimiter = ',')]
    pub widths: Vec<usize>,
    /// Comma-separated noise presets or config model names.
    #[arg(long, global = true, value_delimiter = ',')]
    pub noise: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exhaustive MED, NMED and error rate.
    Metrics,
    /// Mean output probability under each noise model.
    NoiseSweep,
    /// Improvement of each design over the baselines.
    Compare {
        #[arg(long, value_delimiter = ',')]
        baseline: Vec<Family>,
    },
    /// QASM for one design, or the design table for the configured ones.
    Build {
        family: Option<Family>,
        n: Option<usize>,
    },
}

impl Cli {
    /// The experiment file or preset with command-line overrides applied.
    pub fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match (&self.config, &self.preset) {
            (Some(path), _) => ExperimentConfig::load(path)?,
            (None, Some(name)) => ExperimentConfig::preset(name)?,
            (None, None) => ExperimentConfig::default(),
        };
        if !self.families.is_empty() {
            cfg.families = self.families.clone();
        }
        if !self.widths.is_empty() {
            cfg.n = self.widths.clone();
        }
        if !self.noise.is_empty() {
            cfg.noise = self.noise.clone();
        }
        if !self.format.is_empty() {
            cfg.formats = self.format.clone();
        }
        if let Command::Compare { baseline } = &self.command {
            if !baseline.is_empty() {
                cfg.baselines = baseline.clone();
            }
        }
        cfg.toffoli_policy = self.toffoli_policy.or(cfg.toffoli_policy);
        cfg.idle = self.idle.map(|s| s == Switch::On).or(cfg.idle);
        cfg.out = self.out.clone().or(cfg.out);
        cfg.seed = self.seed.or(cfg.seed);
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let cfg = cli.config()?;
    match &cli.command {
        Command::Metrics => {
            let table = commands::metrics_table(&commands::metrics(&cfg)?);
            emit(&cfg, "metrics", &table, stdout)
        }
        Command::NoiseSweep => {
            let table = commands::sweep_table(&commands::noise_sweep(&cfg)?);
            emit(&cfg, "noise-sweep", &table, stdout)
        }
        Command::Compare { .. } => {
            commands::check_baselines(&cfg)?;
            let reports = commands::noise_sweep(&cfg)?;
            let table = commands::compare_table(&commands::compare(&cfg, &reports)?);
            emit(&cfg, "compare", &table, stdout)
        }
        Command::Build {
            family: Some(family),
            n,
        } => {
            let n = n.unwrap_or(cfg.n[0]);
            let circuit = build(&AdderSpec::new(*family, n)?);
            let qasm = export_qasm(&circuit);
            let summary = commands::build_summary(&circuit);
            match &cfg.out {
                Some(dir) => {
                    let path = write_file(dir, &format!("{family}_n{n}.qasm"), &qasm)?;
                    writeln!(stdout, "{}: {summary}", path.display())?;
                }
                None => {
                    stdout.write_all(qasm.as_bytes())?;
                    eprintln!("{family} n={n}: {summary}");
                }
            }
            Ok(())
        }
        Command::Build { family: None, .. } => {
            let table = commands::design_table(&commands::design(&cfg)?);
            emit(&cfg, "design", &table, stdout)
        }
    }
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, text)?;
    Ok(path)
}

fn emit(cfg: &ExperimentConfig, stem: &str, table: &Table, stdout: &mut dyn Write) -> Result<()> {
    for &format in &cfg.formats {
        let text = table.render(format);
        match &cfg.out {
            Some(dir) => {
                let path = write_file(dir, &format!("{stem}.{}", format.extension()), &text)?;
                writeln!(stdout, "{}", path.display())?;
            }
            None => stdout.write_all(text.as_bytes())?,
        }
    }
    Ok(())
}
