//! Approximation-error metrics by exhaustive sweep over all `4^n` operand
//! pairs (carry-in fixed at 0). Everything stays an exact rational.

use num_rational::Ratio;
use serde::Serialize;

use crate::adders::{build, eval_classical, read_output, AdderSpec, Family, Inputs};
use crate::error::{Error, Result};
use crate::exec::Exec;

pub const MAX_METRICS_WIDTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetricsReport {
    pub family: Family,
    pub n: usize,
    pub med: Ratio<u64>,
    pub nmed: Ratio<u64>,
    pub error_rate: Ratio<u64>,
    pub s_max: u64,
    pub total: u64,
}

pub fn error_distance(s_exact: u64, s_approx: u64) -> u64 {
    s_exact.abs_diff(s_approx)
}

/// Exact reference: modular sum for carry-less designs, full sum otherwise.
pub fn exact_reference(family: Family, n: usize, a: u64, b: u64) -> u64 {
    if family.has_cout() {
        a + b
    } else {
        (a + b) % (1u64 << n)
    }
}

pub fn max_exact_output(family: Family, n: usize) -> u64 {
    if family.has_cout() {
        (1u64 << (n + 1)) - 2
    } else {
        (1u64 << n) - 1
    }
}

fn check_width(n: usize) -> Result<()> {
    if n == 0 || n > MAX_METRICS_WIDTH {
        return Err(Error::BitWidth(n));
    }
    Ok(())
}

fn accumulate<F>(family: Family, n: usize, exec: Exec, approx: F) -> MetricsReport
where
    F: Fn(u64, u64) -> u64 + Sync + Send,
{
    let limit = 1u64 << n;
    // (sum of ED, number of erroneous inputs) per value of a
    let rows = exec.map(0..limit as usize, |a| {
        let a = a as u64;
        (0..limit).fold((0u64, 0u64), |(sum, errors), b| {
            let ed = error_distance(exact_reference(family, n, a, b), approx(a, b));
            (sum + ed, errors + u64::from(ed > 0))
        })
    });
    let (ed_sum, errors) = rows
        .into_iter()
        .fold((0, 0), |(s, e), (rs, re)| (s + rs, e + re));
    let total = limit * limit;
    let s_max = max_exact_output(family, n);
    let med = Ratio::new(ed_sum, total);
    MetricsReport {
        family,
        n,
        med,
        nmed: med / s_max,
        error_rate: Ratio::new(errors, total),
        s_max,
        total,
    }
}

pub fn compute_metrics(family: Family, n: usize) -> Result<MetricsReport> {
    compute_metrics_with(family, n, Exec::default())
}

pub fn compute_metrics_with(family: Family, n: usize, exec: Exec) -> Result<MetricsReport> {
    check_width(n)?;
    let spec = AdderSpec::new(family, n)?;
    Ok(accumulate(family, n, exec, |a, b| {
        eval_classical(&spec, a, b, 0).expect("operands are in range")
    }))
}

/// Same metrics, with outputs taken from basis-state simulation of the
/// generated circuit rather than the closed-form semantics.
pub fn compute_metrics_simulated(family: Family, n: usize, exec: Exec) -> Result<MetricsReport> {
    check_width(n)?;
    let circuit = build(&AdderSpec::new(family, n)?);
    Ok(accumulate(family, n, exec, |a, b| {
        let start = Inputs::new(a, b).basis_index(&circuit);
        let end = circuit
            .permute_basis(start)
            .expect("generated adders are classical");
        read_output(&circuit, end)
    }))
}

pub fn sweep(
    families: &[Family],
    widths: impl IntoIterator<Item = usize>,
) -> Result<Vec<MetricsReport>> {
    let widths: Vec<usize> = widths.into_iter().collect();
    let mut out = Vec::with_capacity(families.len() * widths.len());
    for &family in families {
        for &n in &widths {
            out.push(compute_metrics(family, n)?);
        }
    }
    Ok(out)
}
