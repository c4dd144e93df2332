use aqa_core::adders::{build, AdderSpec, DesignFormula};
use aqa_core::circuit::{Circuit, DepthProfile};
use aqa_core::metrics::{compute_metrics, MetricsReport};
use aqa_core::sim::{fidelity_sweep, FidelityReport};
use aqa_core::Family;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::report::{fixed4, Table};

fn quotient(numer: u64, denom: u64) -> f64 {
    numer as f64 / denom as f64
}

/// One row per (family, n) in config order.
pub fn metrics(cfg: &ExperimentConfig) -> Result<Vec<MetricsReport>> {
    let widths = cfg.metrics_widths()?;
    let mut out = Vec::with_capacity(cfg.families.len() * widths.len());
    for &family in &cfg.families {
        for &n in widths {
            out.push(compute_metrics(family, n)?);
        }
    }
    Ok(out)
}

pub fn metrics_table(reports: &[MetricsReport]) -> Table {
    let mut t = Table::new(
        vec!["family", "n", "med", "nmed", "error_rate", "s_max", "N"],
        0,
    );
    for r in reports {
        t.rows.push(vec![
            r.family.to_string(),
            r.n.to_string(),
            fixed4(quotient(*r.med.numer(), *r.med.denom())),
            fixed4(quotient(*r.nmed.numer(), *r.nmed.denom())),
            fixed4(quotient(*r.error_rate.numer(), *r.error_rate.denom())),
            r.s_max.to_string(),
            r.total.to_string(),
        ]);
    }
    t
}

/// One report per (family, n, noise) in config order.
pub fn noise_sweep(cfg: &ExperimentConfig) -> Result<Vec<FidelityReport>> {
    let models = cfg
        .noise
        .iter()
        .map(|name| cfg.model(name))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for &family in &cfg.families {
        for &n in &cfg.n {
            let spec = AdderSpec::new(family, n)?;
            for model in &models {
                out.push(fidelity_sweep(&spec, model)?);
            }
        }
    }
    Ok(out)
}

pub fn sweep_table(reports: &[FidelityReport]) -> Table {
    let mut t = Table::new(
        vec!["family", "n", "noise", "toffoli_policy", "idle", "fidelity"],
        0,
    );
    for r in reports {
        t.rows.push(vec![
            r.family.to_string(),
            r.n.to_string(),
            r.noise.clone(),
            r.toffoli_policy.to_string(),
            if r.idle_mode { "on" } else { "off" }.to_string(),
            fixed4(r.avg_success_probability),
        ]);
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub noise: String,
    pub n: usize,
    pub baseline: Family,
    pub candidate: Family,
    pub baseline_fidelity: f64,
    pub candidate_fidelity: f64,
    pub improvement_pct: f64,
}

pub fn improvement_pct(baseline: f64, candidate: f64) -> f64 {
    100.0 * (candidate - baseline) / baseline
}

pub fn check_baselines(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.baselines.is_empty() {
        return Err(CliError::Config(
            "compare needs at least one baseline".into(),
        ));
    }
    if let Some(b) = cfg.baselines.iter().find(|b| !cfg.families.contains(b)) {
        return Err(CliError::Config(format!(
            "baseline `{b}` is not among the swept families"
        )));
    }
    Ok(())
}

/// Every non-baseline family against every baseline, per width and noise
/// model.
pub fn compare(cfg: &ExperimentConfig, reports: &[FidelityReport]) -> Result<Vec<ComparisonRow>> {
    check_baselines(cfg)?;
    let find = |family: Family, n: usize, noise: &str| {
        reports
            .iter()
            .find(|r| r.family == family && r.n == n && r.noise == noise)
            .map(|r| r.avg_success_probability)
            .ok_or_else(|| CliError::Config(format!("no sweep result for {family} n={n} {noise}")))
    };
    let candidates: Vec<Family> = cfg
        .families
        .iter()
        .copied()
        .filter(|f| !cfg.baselines.contains(f))
        .collect();
    let mut rows = Vec::new();
    for &n in &cfg.n {
        for noise in &cfg.noise {
            for &candidate in &candidates {
                for &baseline in &cfg.baselines {
                    let b = find(baseline, n, noise)?;
                    let c = find(candidate, n, noise)?;
                    rows.push(ComparisonRow {
                        noise: noise.clone(),
                        n,
                        baseline,
                        candidate,
                        baseline_fidelity: b,
                        candidate_fidelity: c,
                        improvement_pct: improvement_pct(b, c),
                    });
                }
            }
        }
    }
    Ok(rows)
}

pub fn compare_table(rows: &[ComparisonRow]) -> Table {
    let mut t = Table::new(
        vec![
            "noise",
            "n",
            "baseline",
            "candidate",
            "baseline_fidelity",
            "candidate_fidelity",
            "improvement_pct",
        ],
        0,
    );
    for r in rows {
        t.rows.push(vec![
            r.noise.clone(),
            r.n.to_string(),
            r.baseline.to_string(),
            r.candidate.to_string(),
            fixed4(r.baseline_fidelity),
            fixed4(r.candidate_fidelity),
            fixed4(r.improvement_pct),
        ]);
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignRow {
    pub family: Family,
    pub n: usize,
    pub qubits: usize,
    pub profile: DepthProfile,
    pub formula: DesignFormula,
}

impl DesignRow {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        let circuit = build(&AdderSpec::new(family, n)?);
        Ok(Self {
            family,
            n,
            qubits: circuit.num_qubits(),
            profile: circuit.depth_profile(),
            formula: family.design_formula(n),
        })
    }

    fn measured(&self) -> [usize; 5] {
        let p = &self.profile;
        [
            self.qubits,
            p.cnot_depth,
            p.toffoli_depth,
            p.cnot_count,
            p.toffoli_count,
        ]
    }

    fn expected(&self) -> [usize; 5] {
        let f = &self.formula;
        [
            f.qubits,
            f.cnot_depth,
            f.toffoli_depth,
            f.cnot_count,
            f.toffoli_count,
        ]
    }

    pub fn matches_formula(&self) -> bool {
        self.measured() == self.expected()
    }
}

pub fn design(cfg: &ExperimentConfig) -> Result<Vec<DesignRow>> {
    let mut rows = Vec::new();
    for &family in &cfg.families {
        for &n in &cfg.n {
            rows.push(DesignRow::new(family, n)?);
        }
    }
    Ok(rows)
}

/// Measured structure next to the closed forms; Markdown cells read
/// `value (formula)` and mismatches are flagged.
pub fn design_table(rows: &[DesignRow]) -> Table {
    let mut t = Table::new(
        vec![
            "family",
            "n",
            "qubits",
            "cnot_depth",
            "toffoli_depth",
            "cnot_count",
            "toffoli_count",
            "matches_formula",
        ],
        0,
    );
    let mut md = Vec::new();
    for r in rows {
        let measured = r.measured();
        let ok = if r.matches_formula() { "yes" } else { "no" };
        let mut row = vec![r.family.to_string(), r.n.to_string()];
        row.extend(measured.iter().map(|v| v.to_string()));
        row.push(ok.to_string());
        t.rows.push(row);

        let mut cells = vec![r.family.label().to_string(), r.n.to_string()];
        for ((v, want), text) in measured
            .iter()
            .zip(r.expected())
            .zip(r.family.design_formula_text())
        {
            let flag = if *v == want { "" } else { " !" };
            cells.push(format!("{v} ({text}){flag}"));
        }
        cells.push(ok.to_string());
        md.push(cells);
    }
    t.md_rows = Some(md);
    t
}

/// `qubits 9, cnot 4, toffoli 1, cnot depth 1, toffoli depth 1`
pub fn build_summary(circuit: &Circuit) -> String {
    let p = circuit.depth_profile();
    format!(
        "qubits {}, cnot {}, toffoli {}, cnot depth {}, toffoli depth {}",
        circuit.num_qubits(),
        p.cnot_count,
        p.toffoli_count,
        p.cnot_depth,
        p.toffoli_depth
    )
}
