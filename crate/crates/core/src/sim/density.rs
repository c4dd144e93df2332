//! Density matrices over computational-basis support.
//!
//! Every nonzero entry of a PSD matrix lies in `S x S`, where `S` is the set
//! of basis states with nonzero population. Coherent states keep their
//! nonzero entries in a sorted sparse list; states with no coherences are
//! stored as their diagonal.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::{GateKind, GateOp};
use crate::error::{Error, Result};
use crate::noise::{KrausChannel, Matrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `rho -> sum K rho K^dagger` as a sparse linear map on the `d x d` block
/// touched by a channel, with entries indexed by `row * d + col`.
#[derive(Debug, Clone)]
pub struct Superop {
    dim: usize,
    /// `(out, weight)` for each input index.
    columns: Vec<Vec<(usize, Complex64)>>,
    /// Population transfer `(out, in, weight)` when the map sends diagonal
    /// blocks to diagonal blocks.
    populations: Option<Vec<(usize, usize, f64)>>,
}

impl Superop {
    pub fn from_channel(channel: &KrausChannel) -> Self {
        Self::from_kraus(channel.arity(), channel.ops().iter().cloned())
    }

    /// Heisenberg-picture map `O -> sum K^dagger O K`.
    pub fn adjoint_of(channel: &KrausChannel) -> Self {
        Self::from_kraus(channel.arity(), channel.ops().iter().map(|k| k.adjoint()))
    }

    fn from_kraus(arity: usize, ops: impl Iterator<Item = Matrix>) -> Self {
        let d = 1usize << arity;
        let mut dense = vec![ZERO; d * d * d * d];
        for k in ops {
            for r in 0..d {
                for rp in 0..d {
                    let left = k[(r, rp)];
                    if left == ZERO {
                        continue;
                    }
                    for c in 0..d {
                        for cp in 0..d {
                            let right = k[(c, cp)].conj();
                            if right != ZERO {
                                dense[(r * d + c) * d * d + rp * d + cp] += left * right;
                            }
                        }
                    }
                }
            }
        }
        let entries: Vec<(usize, usize, Complex64)> = dense
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != ZERO)
            .map(|(i, w)| (i / (d * d), i % (d * d), *w))
            .collect();
        let is_diag = |idx: usize| idx / d == idx % d;
        let closed = entries
            .iter()
            .all(|&(out, inp, _)| !is_diag(inp) || is_diag(out));
        let populations = closed.then(|| {
            entries
                .iter()
                .filter(|&&(out, inp, _)| is_diag(inp) && is_diag(out))
                .map(|&(out, inp, w)| (out / d, inp / d, w.re))
                .collect()
        });
        let mut columns = vec![Vec::new(); d * d];
        for &(out, inp, w) in &entries {
            columns[inp].push((out, w));
        }
        Self {
            dim: d,
            columns,
            populations,
        }
    }

    pub fn arity(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn preserves_diagonal(&self) -> bool {
        self.populations.is_some()
    }
}

pub fn gate_unitary(kind: GateKind) -> Option<Matrix> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match kind {
        GateKind::H => Some(Matrix::from_row_slice(
            2,
            2,
            &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)],
        )),
        GateKind::T => Some(Matrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), ZERO, ZERO, c(s, s)],
        )),
        GateKind::Tdg => Some(Matrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), ZERO, ZERO, c(s, -s)],
        )),
        _ => None,
    }
}

/// Off-diagonal magnitudes below this are rounding residue of cancelling
/// amplitudes and are dropped.
const COHERENCE_CUTOFF: f64 = 1e-15;

type Entries = Vec<((usize, usize), Complex64)>;

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    /// Populations aligned with `support`.
    Diagonal(Vec<f64>),
    /// Nonzero entries sorted by `(row, col)`.
    Sparse(Entries),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    support: Vec<usize>,
    repr: Repr,
}

impl DensityMatrix {
    pub fn from_index(num_qubits: usize, index: usize) -> Self {
        assert!(index < 1 << num_qubits, "basis index out of range");
        Self {
            num_qubits,
            support: vec![index],
            repr: Repr::Diagonal(vec![1.0]),
        }
    }

    /// Projector onto a basis state; character `k` of `bits` is qubit `k`.
    pub fn prepare_basis(num_qubits: usize, bits: &str) -> Result<Self> {
        if bits.len() != num_qubits || num_qubits == 0 {
            return Err(Error::BitstringLength {
                expected: num_qubits,
                got: bits.len(),
            });
        }
        let mut index = 0;
        for (k, ch) in bits.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => index |= 1 << k,
                _ => return Err(Error::Parameter(format!("bad bit `{ch}`"))),
            }
        }
        Ok(Self::from_index(num_qubits, index))
    }

    /// Builds a state from a full `2^q x 2^q` matrix.
    pub fn from_matrix(num_qubits: usize, m: &Matrix) -> Self {
        let dim = 1 << num_qubits;
        assert_eq!(m.shape(), (dim, dim));
        let entries = (0..dim)
            .flat_map(|r| (0..dim).map(move |c| ((r, c), m[(r, c)])))
            .filter(|(_, v)| *v != ZERO)
            .collect();
        let mut rho = Self {
            num_qubits,
            support: Vec::new(),
            repr: Repr::Sparse(entries),
        };
        rho.settle();
        rho
    }

    /// Diagonal operator from `(basis index, weight)` pairs.
    pub fn from_populations(num_qubits: usize, mut pops: Vec<(usize, f64)>) -> Self {
        pops.sort_unstable_by_key(|&(i, _)| i);
        pops.dedup_by(|next, kept| {
            let same = next.0 == kept.0;
            if same {
                kept.1 += next.1;
            }
            same
        });
        pops.retain(|&(_, v)| v != 0.0);
        assert!(
            pops.iter().all(|&(i, _)| i < 1 << num_qubits),
            "basis index out of range"
        );
        let (support, weights) = pops.into_iter().unzip();
        Self {
            num_qubits,
            support,
            repr: Repr::Diagonal(weights),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.repr, Repr::Diagonal(_))
    }

    /// Number of stored entries.
    pub fn stored_len(&self) -> usize {
        match &self.repr {
            Repr::Diagonal(p) => p.len(),
            Repr::Sparse(e) => e.len(),
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        match &self.repr {
            Repr::Diagonal(p) if row == col => self
                .support
                .binary_search(&row)
                .map_or(ZERO, |pos| Complex64::new(p[pos], 0.0)),
            Repr::Diagonal(_) => ZERO,
            Repr::Sparse(e) => e
                .binary_search_by_key(&(row, col), |&(k, _)| k)
                .map_or(ZERO, |pos| e[pos].1),
        }
    }

    pub fn to_matrix(&self) -> Matrix {
        let dim = 1 << self.num_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        match &self.repr {
            Repr::Diagonal(p) => {
                for (&i, &v) in self.support.iter().zip(p) {
                    m[(i, i)] = Complex64::new(v, 0.0);
                }
            }
            Repr::Sparse(e) => {
                for &((r, c), v) in e {
                    m[(r, c)] = v;
                }
            }
        }
        m
    }

    /// `(basis index, population)` over the support.
    pub fn probabilities(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.support.iter().map(|&i| (i, self.entry(i, i).re))
    }

    pub fn trace(&self) -> Complex64 {
        match &self.repr {
            Repr::Diagonal(p) => Complex64::new(p.iter().sum(), 0.0),
            Repr::Sparse(e) => e.iter().filter(|((r, c), _)| r == c).map(|(_, v)| v).sum(),
        }
    }

    /// `Re tr(self * other)`.
    pub fn overlap(&self, other: &DensityMatrix) -> f64 {
        match &self.repr {
            Repr::Diagonal(p) => self
                .support
                .iter()
                .zip(p)
                .map(|(&i, &v)| v * other.entry(i, i).re)
                .sum(),
            Repr::Sparse(e) => e
                .iter()
                .map(|&((r, c), v)| (v * other.entry(c, r)).re)
                .sum(),
        }
    }

    /// Largest `|rho_ij - conj(rho_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let Repr::Sparse(e) = &self.repr else {
            return 0.0;
        };
        e.iter()
            .map(|&((r, c), v)| (v - self.entry(c, r).conj()).norm())
            .fold(0.0, f64::max)
    }

    fn entries(&self) -> Entries {
        match &self.repr {
            Repr::Diagonal(p) => self
                .support
                .iter()
                .zip(p)
                .map(|(&i, &v)| ((i, i), Complex64::new(v, 0.0)))
                .collect(),
            Repr::Sparse(e) => e.clone(),
        }
    }

    /// Recomputes the support and drops to the diagonal form when no
    /// coherence survives.
    fn settle(&mut self) {
        let Repr::Sparse(e) = &mut self.repr else {
            return;
        };
        e.retain(|&((r, c), v)| {
            if r == c {
                v != ZERO
            } else {
                v.norm() >= COHERENCE_CUTOFF
            }
        });
        self.support = e
            .iter()
            .filter(|((r, c), _)| r == c)
            .map(|((r, _), _)| *r)
            .collect();
        if e.len() == self.support.len() {
            let p = e.iter().map(|(_, v)| v.re).collect();
            self.repr = Repr::Diagonal(p);
        }
    }

    /// Relabels basis states by the bijection `perm`.
    fn permute(&mut self, perm: impl Fn(usize) -> usize) {
        match &mut self.repr {
            Repr::Diagonal(p) => {
                let mut mapped: Vec<(usize, f64)> = self
                    .support
                    .iter()
                    .zip(p.iter())
                    .map(|(&i, &v)| (perm(i), v))
                    .collect();
                mapped.sort_unstable_by_key(|&(i, _)| i);
                self.support = mapped.iter().map(|&(i, _)| i).collect();
                *p = mapped.into_iter().map(|(_, v)| v).collect();
            }
            Repr::Sparse(e) => {
                for ((r, c), _) in e.iter_mut() {
                    *r = perm(*r);
                    *c = perm(*c);
                }
                e.sort_unstable_by_key(|&(k, _)| k);
                self.support = e
                    .iter()
                    .filter(|((r, c), _)| r == c)
                    .map(|((r, _), _)| *r)
                    .collect();
            }
        }
    }

    pub fn apply_gate(&mut self, gate: &GateOp) {
        if gate.kind().is_classical() {
            self.permute(|i| gate.permute(i).expect("classical gate"));
        } else {
            let u = gate_unitary(gate.kind()).expect("non-classical gates have a unitary");
            let op = Superop::from_channel(&KrausChannel::unitary(u));
            self.apply_superop(&op, gate.qubits());
        }
    }

    pub fn apply_channel(&mut self, channel: &KrausChannel, qubits: &[usize]) {
        self.apply_superop(&Superop::from_channel(channel), qubits);
    }

    pub fn apply_superop(&mut self, op: &Superop, qubits: &[usize]) {
        let d = op.dim;
        assert_eq!(1 << qubits.len(), d, "channel arity does not match qubits");
        let offsets: Vec<usize> = (0..d)
            .map(|l| {
                qubits
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| l >> j & 1 == 1)
                    .map(|(_, &q)| 1usize << q)
                    .sum()
            })
            .collect();
        let mask = offsets[d - 1];
        let local = |i: usize| -> usize {
            qubits
                .iter()
                .enumerate()
                .map(|(j, &q)| (i >> q & 1) << j)
                .sum()
        };

        if let (Repr::Diagonal(p), Some(pops)) = (&self.repr, &op.populations) {
            let mut out: Vec<(usize, f64)> = Vec::with_capacity(p.len() * d);
            for (&i, &v) in self.support.iter().zip(p) {
                let (rest, inp) = (i & !mask, local(i));
                for &(o, ii, w) in pops {
                    if ii == inp {
                        out.push((rest | offsets[o], w * v));
                    }
                }
            }
            out.sort_unstable_by_key(|&(i, _)| i);
            let mut support = Vec::with_capacity(out.len());
            let mut pops_out: Vec<f64> = Vec::with_capacity(out.len());
            for (i, v) in out {
                if support.last() == Some(&i) {
                    *pops_out.last_mut().expect("nonempty") += v;
                } else {
                    support.push(i);
                    pops_out.push(v);
                }
            }
            let (support, pops_out) = support
                .into_iter()
                .zip(pops_out)
                .filter(|&(_, v)| v != 0.0)
                .unzip();
            self.support = support;
            self.repr = Repr::Diagonal(pops_out);
            return;
        }

        let mut out: Entries = Vec::new();
        for ((r, c), v) in self.entries() {
            let inp = local(r) * d + local(c);
            let (rr, cr) = (r & !mask, c & !mask);
            for &(o, w) in &op.columns[inp] {
                out.push(((rr | offsets[o / d], cr | offsets[o % d]), w * v));
            }
        }
        out.sort_unstable_by_key(|&(k, _)| k);
        let mut merged: Entries = Vec::with_capacity(out.len());
        for (k, v) in out {
            match merged.last_mut() {
                Some((last, acc)) if *last == k => *acc += v,
                _ => merged.push((k, v)),
            }
        }
        self.repr = Repr::Sparse(merged);
        self.settle();
    }
}
