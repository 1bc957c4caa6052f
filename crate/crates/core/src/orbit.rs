//! Birational coordinates on a coadjoint orbit.
//!
//! The forward map sends coordinate blocks `(q_i^j, p_j^i)`, `j < i`, to the
//! matrix `A = Q·ρ·Q⁻¹`, where `Q` is block lower-unitriangular with the
//! q-blocks below the diagonal and `ρ` is block upper-triangular with
//! `λ′_k·I` on the diagonal and block-row `k` equal to `p⃗_k·[Q]_{M−k}`.
//!
//! The inverse map peels the matrix one eigenvalue step ("flight") at a time:
//! find the `λ′_k`-eigenspace, normalize its basis to `[I; q]` in the chosen
//! chart, conjugate by `L = (I 0; q I)` and read off `p` from the top-right
//! block of `L⁻¹AL = (λI p; 0 A_k)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::jordan::TypeSequence;
use crate::linalg::{LinalgError, Mat};
use crate::scalar::GaussianRational;
use crate::symplectic::{CoordKind, CoordinateIndex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoordsError {
    #[error("block {kind}{block:?} has shape {found:?}, expected {expected:?}")]
    BlockShape {
        kind: CoordKind,
        block: (usize, usize),
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("block {kind}{block:?} is missing")]
    MissingBlock { kind: CoordKind, block: (usize, usize) },
    #[error("unexpected block {kind}{block:?} for a sequence of {steps} steps")]
    UnexpectedBlock {
        kind: CoordKind,
        block: (usize, usize),
        steps: usize,
    },
    #[error("block key {0:?} is not of the form \"a,b\"")]
    BadKey(String),
    #[error("coordinate index {0} out of range")]
    IndexOutOfRange(CoordinateIndex),
    #[error("expected {expected} coordinate values, got {found}")]
    ValueCount { expected: usize, found: usize },
    #[error("trailing block count {k} exceeds {steps} steps")]
    TrailingOutOfRange { k: usize, steps: usize },
}

/// A point of the chart: one q-block `q_i^j` (`n_i × n_j`) and one p-block
/// `p_j^i` (`n_j × n_i`) for every pair `1 ≤ j < i ≤ M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalCoords {
    type_seq: TypeSequence,
    /// keyed `(i, j)`, `i > j`
    q: BTreeMap<(usize, usize), Mat>,
    /// keyed `(j, i)`, `j < i`
    p: BTreeMap<(usize, usize), Mat>,
}

fn block_pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=m).flat_map(move |j| (j + 1..=m).map(move |i| (j, i)))
}

impl CanonicalCoords {
    pub fn zeros(type_seq: TypeSequence) -> Self {
        let mut q = BTreeMap::new();
        let mut p = BTreeMap::new();
        for (j, i) in block_pairs(type_seq.len()) {
            q.insert((i, j), Mat::zeros(type_seq.n(i), type_seq.n(j)));
            p.insert((j, i), Mat::zeros(type_seq.n(j), type_seq.n(i)));
        }
        Self { type_seq, q, p }
    }

    /// Validate and wrap explicit blocks. `q` is keyed `(i, j)` and `p` is
    /// keyed `(j, i)`, both with `j < i`, 1-based.
    pub fn from_blocks(
        type_seq: TypeSequence,
        q: BTreeMap<(usize, usize), Mat>,
        p: BTreeMap<(usize, usize), Mat>,
    ) -> Result<Self, CoordsError> {
        let m = type_seq.len();
        for (&(i, j), blk) in &q {
            if !(1 <= j && j < i && i <= m) {
                return Err(CoordsError::UnexpectedBlock {
                    kind: CoordKind::Q,
                    block: (i, j),
                    steps: m,
                });
            }
            let expected = (type_seq.n(i), type_seq.n(j));
            if blk.shape() != expected {
                return Err(CoordsError::BlockShape {
                    kind: CoordKind::Q,
                    block: (i, j),
                    expected,
                    found: blk.shape(),
                });
            }
        }
        for (&(j, i), blk) in &p {
            if !(1 <= j && j < i && i <= m) {
                return Err(CoordsError::UnexpectedBlock {
                    kind: CoordKind::P,
                    block: (j, i),
                    steps: m,
                });
            }
            let expected = (type_seq.n(j), type_seq.n(i));
            if blk.shape() != expected {
                return Err(CoordsError::BlockShape {
                    kind: CoordKind::P,
                    block: (j, i),
                    expected,
                    found: blk.shape(),
                });
            }
        }
        for (j, i) in block_pairs(m) {
            if !q.contains_key(&(i, j)) {
                return Err(CoordsError::MissingBlock {
                    kind: CoordKind::Q,
                    block: (i, j),
                });
            }
            if !p.contains_key(&(j, i)) {
                return Err(CoordsError::MissingBlock {
                    kind: CoordKind::P,
                    block: (j, i),
                });
            }
        }
        Ok(Self { type_seq, q, p })
    }

    /// Fill the chart from values listed in [`crate::symplectic::enumerate_coordinates`] order.
    pub fn from_values(
        type_seq: TypeSequence,
        values: Vec<GaussianRational>,
    ) -> Result<Self, CoordsError> {
        let indices = crate::symplectic::enumerate_coordinates(&type_seq);
        if indices.len() != values.len() {
            return Err(CoordsError::ValueCount {
                expected: indices.len(),
                found: values.len(),
            });
        }
        let mut c = Self::zeros(type_seq);
        for (idx, v) in indices.iter().zip(values) {
            c.set(idx, v)?;
        }
        Ok(c)
    }

    /// Values in enumeration order.
    pub fn values(&self) -> Vec<GaussianRational> {
        crate::symplectic::enumerate_coordinates(&self.type_seq)
            .iter()
            .map(|idx| self.get(idx).expect("enumerated index").clone())
            .collect()
    }

    pub fn type_seq(&self) -> &TypeSequence {
        &self.type_seq
    }

    /// `q_i^j`, `i > j`
    pub fn q_block(&self, i: usize, j: usize) -> &Mat {
        &self.q[&(i, j)]
    }

    /// `p_j^i`, `j < i`
    pub fn p_block(&self, j: usize, i: usize) -> &Mat {
        &self.p[&(j, i)]
    }

    pub fn q_blocks(&self) -> &BTreeMap<(usize, usize), Mat> {
        &self.q
    }

    pub fn p_blocks(&self) -> &BTreeMap<(usize, usize), Mat> {
        &self.p
    }

    pub fn coordinate_count(&self) -> usize {
        self.q.values().chain(self.p.values()).map(|b| b.rows() * b.cols()).sum()
    }

    fn slot(&self, idx: &CoordinateIndex) -> Option<(&Mat, (usize, usize))> {
        let blk = match idx.kind {
            CoordKind::P => self.p.get(&idx.block)?,
            CoordKind::Q => self.q.get(&idx.block)?,
        };
        let (s, t) = idx.entry;
        (s >= 1 && t >= 1 && s <= blk.rows() && t <= blk.cols()).then_some((blk, (s - 1, t - 1)))
    }

    pub fn get(&self, idx: &CoordinateIndex) -> Result<&GaussianRational, CoordsError> {
        let (blk, pos) = self.slot(idx).ok_or(CoordsError::IndexOutOfRange(*idx))?;
        Ok(&blk[pos])
    }

    pub fn set(&mut self, idx: &CoordinateIndex, value: GaussianRational) -> Result<(), CoordsError> {
        let (_, pos) = self.slot(idx).ok_or(CoordsError::IndexOutOfRange(*idx))?;
        let blk = match idx.kind {
            CoordKind::P => self.p.get_mut(&idx.block),
            CoordKind::Q => self.q.get_mut(&idx.block),
        }
        .expect("slot exists");
        blk[pos] = value;
        Ok(())
    }

    /// Same q-blocks, every p-block zero.
    pub fn with_zero_p(&self) -> Self {
        let mut out = self.clone();
        for blk in out.p.values_mut() {
            *blk = Mat::zeros(blk.rows(), blk.cols());
        }
        out
    }

    /// `p⃗_k = (p_k^{k+1} … p_k^M)`, an `n_k × (n_{k+1} + … + n_M)` matrix.
    pub fn p_row(&self, k: usize) -> Mat {
        let m = self.type_seq.len();
        let row: Vec<Mat> = (k + 1..=m).map(|i| self.p_block(k, i).clone()).collect();
        hconcat(self.type_seq.n(k), row)
    }

    /// `q⃗^k = (q_{k+1}^k … q_M^k)ᵀ`, an `(n_{k+1} + … + n_M) × n_k` matrix.
    pub fn q_col(&self, k: usize) -> Mat {
        let m = self.type_seq.len();
        let col: Vec<Vec<Mat>> = (k + 1..=m).map(|i| vec![self.q_block(i, k).clone()]).collect();
        if col.is_empty() {
            return Mat::zeros(0, self.type_seq.n(k));
        }
        Mat::assemble(&col).expect("block shapes are validated")
    }
}

fn hconcat(rows: usize, blocks: Vec<Mat>) -> Mat {
    if blocks.is_empty() {
        return Mat::zeros(rows, 0);
    }
    Mat::assemble(&[blocks]).expect("block shapes are validated")
}

fn parse_key(key: &str) -> Result<(usize, usize), CoordsError> {
    let bad = || CoordsError::BadKey(key.to_owned());
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

#[derive(Serialize, Deserialize)]
struct CoordsJson {
    type_sequence: TypeSequence,
    q: BTreeMap<String, Mat>,
    p: BTreeMap<String, Mat>,
}

impl Serialize for CanonicalCoords {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let key = |&(a, b): &(usize, usize)| format!("{a},{b}");
        CoordsJson {
            type_sequence: self.type_seq.clone(),
            q: self.q.iter().map(|(k, v)| (key(k), v.clone())).collect(),
            p: self.p.iter().map(|(k, v)| (key(k), v.clone())).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CanonicalCoords {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = CoordsJson::deserialize(deserializer)?;
        let keyed = |m: BTreeMap<String, Mat>| -> Result<BTreeMap<(usize, usize), Mat>, CoordsError> {
            m.into_iter().map(|(k, v)| Ok((parse_key(&k)?, v))).collect()
        };
        let q = keyed(raw.q).map_err(D::Error::custom)?;
        let p = keyed(raw.p).map_err(D::Error::custom)?;
        CanonicalCoords::from_blocks(raw.type_sequence, q, p).map_err(D::Error::custom)
    }
}

/// `Q`: identity blocks on the diagonal, `q_i^j` below it.
pub fn build_q(c: &CanonicalCoords) -> Mat {
    let t = c.type_seq();
    let mut q = Mat::identity(t.total_size());
    for (&(i, j), blk) in c.q_blocks() {
        q.set_block(t.offset(i), t.offset(j), blk)
            .expect("block shapes are validated");
    }
    q
}

/// `[Q]_k`: the trailing `k` block rows and columns of a block matrix laid out
/// along `t`. `[Q]_M = Q`, `[Q]_1 = I_{n_M}`, `[Q]_0` is empty.
pub fn trailing_blocks(t: &TypeSequence, m: &Mat, k: usize) -> Result<Mat, CoordsError> {
    let steps = t.len();
    if k > steps {
        return Err(CoordsError::TrailingOutOfRange { k, steps });
    }
    let n = t.total_size();
    let start = if k == steps { 0 } else { t.offset(steps - k + 1) };
    Ok(m.block(start..n, start..n).expect("in range"))
}

pub fn trailing_q(c: &CanonicalCoords, k: usize) -> Result<Mat, CoordsError> {
    trailing_blocks(c.type_seq(), &build_q(c), k)
}

/// Strictly block-upper part of `ρ` with block-row `k` equal to
/// `p⃗_k·[lower]_{M−k}`. With `lower = Q` this is `ρ − diag(λ′)`; passing a
/// derivative of `Q` gives the corresponding derivative of `ρ`.
pub(crate) fn rho_offdiagonal(c: &CanonicalCoords, lower: &Mat) -> Mat {
    let t = c.type_seq();
    let m = t.len();
    let n = t.total_size();
    let mut rho = Mat::zeros(n, n);
    for k in 1..m {
        let tail = trailing_blocks(t, lower, m - k).expect("k < M");
        let row = &c.p_row(k) * &tail;
        rho.set_block(t.offset(k), t.offset(k + 1), &row)
            .expect("block-row fits");
    }
    rho
}

fn eigen_diagonal(t: &TypeSequence) -> Mat {
    let mut d = Mat::zeros(t.total_size(), t.total_size());
    for k in 1..=t.len() {
        let off = t.offset(k);
        for r in 0..t.n(k) {
            d[(off + r, off + r)] = t.lambda(k).clone();
        }
    }
    d
}

/// `ρ`: `λ′_k·I_{n_k}` on the diagonal and `ρ⃗_k = p⃗_k·[Q]_{M−k}` above.
pub fn build_rho(c: &CanonicalCoords) -> Mat {
    &eigen_diagonal(c.type_seq()) + &rho_offdiagonal(c, &build_q(c))
}

/// `A = Q·ρ·Q⁻¹`. Total on the chart: every coordinate value gives a matrix.
pub fn parameterize(c: &CanonicalCoords) -> Mat {
    let q = build_q(c);
    let q_inv = q.inverse().expect("Q is unitriangular");
    &(&q * &build_rho(c)) * &q_inv
}

/// Same map built flight by flight from the bottom:
/// `A_{k−1} = L_k·(λ′_k I, p⃗_k; 0, A_k)·L_k⁻¹` with `L_k = (I 0; q⃗^k I)`
/// and `A_{M−1} = λ′_M I`.
pub fn parameterize_hierarchical(c: &CanonicalCoords) -> Mat {
    let t = c.type_seq();
    let m = t.len();
    if m == 0 {
        return Mat::zeros(0, 0);
    }
    let mut a = Mat::scalar(t.n(m), t.lambda(m));
    for k in (1..m).rev() {
        let n = t.n(k);
        let rest = a.rows();
        let inner = Mat::assemble(&[
            vec![Mat::scalar(n, t.lambda(k)), c.p_row(k)],
            vec![Mat::zeros(rest, n), a],
        ])
        .expect("flight blocks agree");
        let qc = c.q_col(k);
        let l = lower_shear(&qc);
        let l_inv = lower_shear(&-&qc);
        a = &(&l * &inner) * &l_inv;
    }
    a
}

/// `(I 0; q I)` for an `m × n` block `q`.
fn lower_shear(q: &Mat) -> Mat {
    let (m, n) = q.shape();
    let mut l = Mat::identity(n + m);
    l.set_block(n, 0, q).expect("fits");
    l
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlightError {
    #[error("eigenspace has dimension {found}, expected {expected}")]
    KernelDimension { expected: usize, found: usize },
    #[error("eigenspace is not transverse to the retained coordinates (leading minor singular)")]
    ChartDegenerate,
    #[error("conjugated matrix has a nonzero lower-left block")]
    ConjugationResidue,
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),
}

/// One step of the hierarchy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flight {
    /// `m × n` Grassmannian chart of the eigenspace: basis normalized to `[I; q]`.
    pub q_col: Mat,
    /// `n × m` top-right block of the conjugated matrix.
    pub p_row: Mat,
    /// `m × m` residual matrix `A_k`.
    pub a_next: Mat,
}

pub fn flight(a_prev: &Mat, lambda: &GaussianRational, n: usize) -> Result<Flight, FlightError> {
    if !a_prev.is_square() {
        return Err(FlightError::NotSquare(a_prev.rows(), a_prev.cols()));
    }
    let size = a_prev.rows();
    let kernel = a_prev.shift(lambda).kernel_basis();
    if kernel.cols() != n {
        return Err(FlightError::KernelDimension {
            expected: n,
            found: kernel.cols(),
        });
    }
    let lead = kernel.block(0..n, 0..n).expect("n ≤ size");
    let lead_inv = lead.inverse().map_err(|e| match e {
        LinalgError::Singular => FlightError::ChartDegenerate,
        other => unreachable!("square leading block: {other}"),
    })?;
    let normalized = &kernel * &lead_inv;
    let q_col = normalized.block(n..size, 0..n).expect("in range");
    let conj = &(&lower_shear(&-&q_col) * a_prev) * &lower_shear(&q_col);
    if !conj.block(n..size, 0..n).expect("in range").is_zero() {
        return Err(FlightError::ConjugationResidue);
    }
    Ok(Flight {
        p_row: conj.block(0..n, n..size).expect("in range"),
        a_next: conj.block(n..size, n..size).expect("in range"),
        q_col,
    })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChartError {
    #[error("chart is not a permutation of 1..={0}")]
    NotPermutation(usize),
    #[error("chart size {chart} does not match matrix size {matrix}")]
    SizeMismatch { chart: usize, matrix: usize },
}

/// An ordering of the basis. Chart basis vector `r` is original basis vector
/// `perm[r]`; the chart view of `A` has entries `A[perm[r], perm[c]]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    perm: Vec<usize>,
}

impl Chart {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
        }
    }

    /// From a 0-based permutation.
    pub fn new(perm: Vec<usize>) -> Result<Self, ChartError> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(ChartError::NotPermutation(n));
            }
        }
        Ok(Self { perm })
    }

    /// From the 1-based form used in chart files.
    pub fn from_one_based(perm: &[usize]) -> Result<Self, ChartError> {
        let zero_based = perm
            .iter()
            .map(|&p| p.checked_sub(1).ok_or(ChartError::NotPermutation(perm.len())))
            .collect::<Result<_, _>>()?;
        Self::new(zero_based)
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.perm.iter().map(|p| p + 1).collect()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(k, &p)| k == p)
    }

    pub fn inverse(&self) -> Chart {
        let mut inv = vec![0; self.perm.len()];
        for (k, &p) in self.perm.iter().enumerate() {
            inv[p] = k;
        }
        Chart { perm: inv }
    }

    /// Original basis → chart basis.
    pub fn apply(&self, a: &Mat) -> Result<Mat, ChartError> {
        self.check(a)?;
        Ok(a.permute_similar(&self.perm))
    }

    /// Chart basis → original basis.
    pub fn unapply(&self, a: &Mat) -> Result<Mat, ChartError> {
        self.check(a)?;
        Ok(a.permute_similar(&self.inverse().perm))
    }

    fn check(&self, a: &Mat) -> Result<(), ChartError> {
        if a.shape() != (self.perm.len(), self.perm.len()) {
            return Err(ChartError::SizeMismatch {
                chart: self.perm.len(),
                matrix: a.rows(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart{:?}", self.one_based())
    }
}

#[derive(Serialize, Deserialize)]
struct ChartJson {
    perm: Vec<usize>,
}

impl Serialize for Chart {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ChartJson {
            perm: self.one_based(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Chart {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = ChartJson::deserialize(deserializer)?;
        Chart::from_one_based(&raw.perm).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("matrix is {found:?}, type sequence needs {expected}x{expected}")]
    Shape { expected: usize, found: (usize, usize) },
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("flight {index}: {source}")]
    Flight {
        /// 1-based
        index: usize,
        source: FlightError,
    },
    #[error("final residue is not {lambda}·I")]
    FinalResidue { lambda: GaussianRational, found: Mat },
    #[error("no chart found: {0}")]
    NoChart(String),
}

impl ExtractError {
    pub fn flight_index(&self) -> Option<usize> {
        match self {
            ExtractError::Flight { index, .. } => Some(*index),
            _ => None,
        }
    }
}

/// Every flight of the hierarchy for a matrix in chart coordinates.
#[derive(Clone, Debug)]
pub struct Hierarchy {
    /// `A_0` (the chart view of the input), `A_1`, …, `A_{M−1}`.
    pub stages: Vec<Mat>,
    pub flights: Vec<Flight>,
}

pub fn hierarchy(t: &TypeSequence, a: &Mat, chart: &Chart) -> Result<Hierarchy, ExtractError> {
    let size = t.total_size();
    if a.shape() != (size, size) {
        return Err(ExtractError::Shape {
            expected: size,
            found: a.shape(),
        });
    }
    let mut current = chart.apply(a)?;
    let mut stages = vec![current.clone()];
    let mut flights = Vec::new();
    for k in 1..t.len() {
        let f = flight(&current, t.lambda(k), t.n(k))
            .map_err(|source| ExtractError::Flight { index: k, source })?;
        current = f.a_next.clone();
        stages.push(current.clone());
        flights.push(f);
    }
    if let Some(last) = t.steps().last() {
        if current != Mat::scalar(last.n, &last.lambda) {
            return Err(ExtractError::FinalResidue {
                lambda: last.lambda.clone(),
                found: current,
            });
        }
    }
    Ok(Hierarchy { stages, flights })
}

/// Inverse of [`parameterize`] on the orbit, in the given chart.
pub fn extract(t: &TypeSequence, a: &Mat, chart: &Chart) -> Result<CanonicalCoords, ExtractError> {
    let h = hierarchy(t, a, chart)?;
    let m = t.len();
    let mut q = BTreeMap::new();
    let mut p = BTreeMap::new();
    for (f, k) in h.flights.iter().zip(1..) {
        let mut off = 0;
        for i in k + 1..=m {
            let ni = t.n(i);
            q.insert((i, k), f.q_col.block(off..off + ni, 0..t.n(k)).expect("in range"));
            p.insert((k, i), f.p_row.block(0..t.n(k), off..off + ni).expect("in range"));
            off += ni;
        }
    }
    Ok(CanonicalCoords::from_blocks(t.clone(), q, p).expect("blocks cut from the layout"))
}

/// Greedy chart search: at each flight the first `n_k` independent rows of
/// the eigenspace basis become the leading coordinates.
pub fn find_chart(t: &TypeSequence, a: &Mat) -> Result<Chart, ExtractError> {
    let size = t.total_size();
    if a.shape() != (size, size) {
        return Err(ExtractError::Shape {
            expected: size,
            found: a.shape(),
        });
    }
    let mut order: Vec<usize> = (0..size).collect();
    let mut current = a.clone();
    let mut start = 0;
    for k in 1..t.len() {
        let n = t.n(k);
        let kernel = current.shift(t.lambda(k)).kernel_basis();
        if kernel.cols() != n {
            return Err(ExtractError::Flight {
                index: k,
                source: FlightError::KernelDimension {
                    expected: n,
                    found: kernel.cols(),
                },
            });
        }
        let pivots = kernel.transpose().rref().pivots;
        let local: Vec<usize> = pivots
            .iter()
            .copied()
            .chain((0..current.rows()).filter(|r| !pivots.contains(r)))
            .collect();
        let reordered: Vec<usize> = local.iter().map(|&r| order[start + r]).collect();
        order[start..].copy_from_slice(&reordered);
        let f = flight(&current.permute_similar(&local), t.lambda(k), n)
            .map_err(|source| ExtractError::Flight { index: k, source })?;
        current = f.a_next;
        start += n;
    }
    let chart = Chart::new(order).expect("reordering of 0..N");
    hierarchy(t, a, &chart)?;
    Ok(chart)
}

/// Extract in the identity chart when possible, otherwise in a found chart.
pub fn extract_auto(t: &TypeSequence, a: &Mat) -> Result<(CanonicalCoords, Chart), ExtractError> {
    let identity = Chart::identity(t.total_size());
    match extract(t, a, &identity) {
        Ok(c) => Ok((c, identity)),
        Err(ExtractError::Flight { .. }) => {
            let chart = find_chart(t, a)?;
            Ok((extract(t, a, &chart)?, chart))
        }
        Err(e) => Err(e),
    }
}
