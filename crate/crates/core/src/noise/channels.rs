use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Matrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A CPTP map on one or two qubits, `rho -> sum K rho K^dagger`.
///
/// Matrix index bit `j` corresponds to the `j`-th qubit the channel is
/// applied to.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    arity: usize,
    ops: Vec<Matrix>,
}

fn real(rows: usize, vals: &[f64]) -> Matrix {
    Matrix::from_row_iterator(rows, rows, vals.iter().map(|&v| Complex64::new(v, 0.0)))
}

pub fn pauli(index: usize) -> Matrix {
    match index {
        0 => Matrix::identity(2, 2),
        1 => real(2, &[0.0, 1.0, 1.0, 0.0]),
        2 => Matrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        3 => real(2, &[1.0, 0.0, 0.0, -1.0]),
        _ => unreachable!("pauli index is 0..4"),
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::Parameter(format!("{name} = {p} not in [0, 1]")));
    }
    Ok(())
}

impl KrausChannel {
    pub fn new(arity: usize, ops: Vec<Matrix>) -> Result<Self> {
        let dim = 1usize << arity;
        if ops.is_empty() || ops.iter().any(|k| k.shape() != (dim, dim)) {
            return Err(Error::Parameter(format!(
                "Kraus operators must be {dim}x{dim} and non-empty"
            )));
        }
        Ok(Self { arity, ops })
    }

    pub fn identity(arity: usize) -> Self {
        let dim = 1 << arity;
        Self {
            arity,
            ops: vec![Matrix::identity(dim, dim)],
        }
    }

    pub fn unitary(u: Matrix) -> Self {
        let arity = u.nrows().trailing_zeros() as usize;
        Self {
            arity,
            ops: vec![u],
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn ops(&self) -> &[Matrix] {
        &self.ops
    }

    /// Largest entry of `sum K^dagger K - I`.
    pub fn completeness_error(&self) -> f64 {
        let dim = 1 << self.arity;
        let sum = self
            .ops
            .iter()
            .fold(Matrix::zeros(dim, dim), |acc, k| acc + k.adjoint() * k);
        (sum - Matrix::identity(dim, dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Applies `self` first, then `then`, on the same qubits.
    pub fn compose(&self, then: &KrausChannel) -> KrausChannel {
        assert_eq!(self.arity, then.arity, "composed channels must share arity");
        let ops = then
            .ops
            .iter()
            .flat_map(|b| self.ops.iter().map(move |a| b * a))
            .collect();
        KrausChannel {
            arity: self.arity,
            ops,
        }
    }

    /// `self` on the low qubit, `high` on the next one.
    pub fn tensor(&self, high: &KrausChannel) -> KrausChannel {
        let ops = high
            .ops
            .iter()
            .flat_map(|h| self.ops.iter().map(move |l| h.kronecker(l)))
            .collect();
        KrausChannel {
            arity: self.arity + high.arity,
            ops,
        }
    }
}

/// With probability `p` the touched qubits are replaced by the maximally
/// mixed state: a uniform mixture over all `4^arity` Paulis.
pub fn depolarizing(p: f64, arity: usize) -> Result<KrausChannel> {
    check_probability("p", p)?;
    if !(1..=2).contains(&arity) {
        return Err(Error::Parameter(format!("depolarizing arity {arity}")));
    }
    if p == 0.0 {
        return Ok(KrausChannel::identity(arity));
    }
    let terms = 1usize << (2 * arity);
    let other = p / terms as f64;
    let ops = (0..terms)
        .map(|t| {
            let weight = if t == 0 { 1.0 - p + other } else { other };
            let op = if arity == 1 {
                pauli(t)
            } else {
                pauli(t >> 2).kronecker(&pauli(t & 3))
            };
            op * Complex64::new(weight.sqrt(), 0.0)
        })
        .filter(|k| k.iter().any(|z| *z != ZERO))
        .collect();
    Ok(KrausChannel { arity, ops })
}

pub fn amplitude_damping(gamma: f64) -> Result<KrausChannel> {
    check_probability("gamma", gamma)?;
    let mut ops = vec![real(2, &[1.0, 0.0, 0.0, (1.0 - gamma).sqrt()])];
    if gamma > 0.0 {
        ops.push(real(2, &[0.0, gamma.sqrt(), 0.0, 0.0]));
    }
    Ok(KrausChannel { arity: 1, ops })
}

/// Scales off-diagonal elements by `sqrt(1 - lam)`; populations untouched.
pub fn phase_damping(lam: f64) -> Result<KrausChannel> {
    check_probability("lambda", lam)?;
    let mut ops = vec![real(2, &[1.0, 0.0, 0.0, (1.0 - lam).sqrt()])];
    if lam > 0.0 {
        ops.push(real(2, &[0.0, 0.0, 0.0, lam.sqrt()]));
    }
    Ok(KrausChannel { arity: 1, ops })
}

pub fn bitflip(p: f64) -> Result<KrausChannel> {
    check_probability("p", p)?;
    let mut ops = vec![Matrix::identity(2, 2) * Complex64::new((1.0 - p).sqrt(), 0.0)];
    if p > 0.0 {
        ops.push(pauli(1) * Complex64::new(p.sqrt(), 0.0));
    }
    Ok(KrausChannel { arity: 1, ops })
}

/// Correlated two-qubit flip: both qubits flip together with probability `p`.
pub fn joint_bitflip(p: f64) -> Result<KrausChannel> {
    check_probability("p", p)?;
    let xx = pauli(1).kronecker(&pauli(1));
    let mut ops = vec![Matrix::identity(4, 4) * Complex64::new((1.0 - p).sqrt(), 0.0)];
    if p > 0.0 {
        ops.push(xx * Complex64::new(p.sqrt(), 0.0));
    }
    Ok(KrausChannel { arity: 2, ops })
}

/// Thermal relaxation for `duration`: amplitude damping with
/// `gamma = 1 - exp(-t/T1)` followed by pure dephasing at rate
/// `1/T_phi = 1/T2 - 1/(2 T1)`. Times share one unit.
pub fn thermal(t1: f64, t2: f64, duration: f64) -> Result<KrausChannel> {
    if t1 <= 0.0 || t2 <= 0.0 || t2 > 2.0 * t1 {
        return Err(Error::Parameter(format!(
            "unphysical relaxation times T1 = {t1}, T2 = {t2} (need 0 < T2 <= 2 T1)"
        )));
    }
    if duration < 0.0 || !duration.is_finite() {
        return Err(Error::Parameter(format!("duration {duration}")));
    }
    let gamma = 1.0 - (-duration / t1).exp();
    let dephasing_rate = (1.0 / t2 - 0.5 / t1).max(0.0);
    let lam = 1.0 - (-2.0 * duration * dephasing_rate).exp();
    let damp = amplitude_damping(gamma)?;
    if lam == 0.0 {
        return Ok(damp);
    }
    Ok(damp.compose(&phase_damping(lam)?))
}

/// Classical state-preparation and measurement errors.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct ReadoutModel {
    /// Probability of reading 1 when the qubit is 0.
    pub p_meas_1_given_0: f64,
    /// Probability of reading 0 when the qubit is 1.
    pub p_meas_0_given_1: f64,
    /// Probability that resetting to 0 leaves the qubit in 1.
    pub p_prep_1_given_0: f64,
    /// Probability that preparing 1 leaves the qubit in 0.
    pub p_prep_0_given_1: f64,
}

impl Default for ReadoutModel {
    fn default() -> Self {
        Self {
            p_meas_1_given_0: 0.0,
            p_meas_0_given_1: 0.0,
            p_prep_1_given_0: 0.0,
            p_prep_0_given_1: 0.0,
        }
    }
}

impl ReadoutModel {
    pub fn validate(&self) -> Result<()> {
        check_probability("p_meas_1_given_0", self.p_meas_1_given_0)?;
        check_probability("p_meas_0_given_1", self.p_meas_0_given_1)?;
        check_probability("p_prep_1_given_0", self.p_prep_1_given_0)?;
        check_probability("p_prep_0_given_1", self.p_prep_0_given_1)
    }

    /// Probability of reporting `reported` when the qubit holds `actual`.
    pub fn read(&self, actual: bool, reported: bool) -> f64 {
        let flip = if actual {
            self.p_meas_0_given_1
        } else {
            self.p_meas_1_given_0
        };
        if actual == reported {
            1.0 - flip
        } else {
            flip
        }
    }

    pub fn prep_flip(&self, intended: bool) -> f64 {
        if intended {
            self.p_prep_0_given_1
        } else {
            self.p_prep_1_given_0
        }
    }
}

pub fn readout_spam_model(
    p_meas_1_given_0: f64,
    p_meas_0_given_1: f64,
    p_prep_1_given_0: f64,
    p_prep_0_given_1: f64,
) -> Result<ReadoutModel> {
    let m = ReadoutModel {
        p_meas_1_given_0,
        p_meas_0_given_1,
        p_prep_1_given_0,
        p_prep_0_given_1,
    };
    m.validate()?;
    Ok(m)
}
