//! The Kirillov-Kostant form on orbit tangents and the Darboux check.
//!
//! A tangent `v` at `A` is written `v = X·A − A·X` and the form is evaluated
//! as a trace against `X`. Any solution `X` gives the same value, since two
//! solutions differ by an element of the centralizer of `A`.
//!
//! Orientation: `ω(∂_p, ∂_q) = +1` for each conjugate pair, i.e.
//! `ω(ξ₁, ξ₂) = −tr(X₁·ξ₂)` with `[X₁, A] = ξ₁`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jordan::TypeSequence;
use crate::linalg::{LinalgError, Mat};
use crate::orbit::{build_q, build_rho, rho_offdiagonal, CanonicalCoords, CoordsError};
use crate::scalar::GaussianRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymplecticError {
    #[error("tangent vectors are attached at different base points")]
    BasePointMismatch,
    #[error("vector is not tangent to the orbit at this point (commutator system inconsistent)")]
    NotTangent,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Coords(#[from] CoordsError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordKind {
    P,
    Q,
}

impl fmt::Display for CoordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoordKind::P => "p",
            CoordKind::Q => "q",
        })
    }
}

/// One scalar coordinate. `block` is `(j, i)` for `p_j^i` and `(i, j)` for
/// `q_i^j`; `entry` is the (row, column) inside the block. All 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CoordinateIndex {
    pub kind: CoordKind,
    pub block: (usize, usize),
    pub entry: (usize, usize),
}

impl CoordinateIndex {
    /// The index this one pairs with to `±1`: `(p_j^i)_{st} ↔ (q_i^j)_{ts}`.
    pub fn conjugate(&self) -> CoordinateIndex {
        CoordinateIndex {
            kind: match self.kind {
                CoordKind::P => CoordKind::Q,
                CoordKind::Q => CoordKind::P,
            },
            block: (self.block.1, self.block.0),
            entry: (self.entry.1, self.entry.0),
        }
    }
}

impl fmt::Display for CoordinateIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[{},{}]({},{})",
            self.kind, self.block.0, self.block.1, self.entry.0, self.entry.1
        )
    }
}

/// All p-entries, then all q-entries; within each kind blocks in
/// lexicographic key order and entries row-major.
pub fn enumerate_coordinates(t: &TypeSequence) -> Vec<CoordinateIndex> {
    let m = t.len();
    let mut out = Vec::with_capacity(t.coordinate_count());
    for j in 1..=m {
        for i in j + 1..=m {
            push_entries(&mut out, CoordKind::P, (j, i), t.n(j), t.n(i));
        }
    }
    for i in 1..=m {
        for j in 1..i {
            push_entries(&mut out, CoordKind::Q, (i, j), t.n(i), t.n(j));
        }
    }
    out
}

fn push_entries(
    out: &mut Vec<CoordinateIndex>,
    kind: CoordKind,
    block: (usize, usize),
    rows: usize,
    cols: usize,
) {
    for s in 1..=rows {
        for t in 1..=cols {
            out.push(CoordinateIndex {
                kind,
                block,
                entry: (s, t),
            });
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentVector {
    pub at: Mat,
    pub v: Mat,
}

/// Exact partial derivative of the parameterization `A = Q·ρ·Q⁻¹`.
///
/// `ρ` is affine in `p` and depends on `q` through the trailing blocks of `Q`,
/// so for a q-entry `∂A = (∂Q·Q⁻¹)·A − A·(∂Q·Q⁻¹) + Q·∂ρ·Q⁻¹`.
pub fn coordinate_tangent(
    c: &CanonicalCoords,
    idx: &CoordinateIndex,
) -> Result<TangentVector, SymplecticError> {
    c.get(idx)?;
    let t = c.type_seq();
    let q = build_q(c);
    let q_inv = q.inverse()?;
    let a = &(&q * &build_rho(c)) * &q_inv;
    let (s, col) = (idx.entry.0 - 1, idx.entry.1 - 1);
    let v = match idx.kind {
        CoordKind::P => {
            // ρ is affine in p: its derivative is ρ's off-diagonal part at a unit p
            let mut unit = c.with_zero_p();
            unit.set(idx, GaussianRational::one())?;
            let d_rho = rho_offdiagonal(&unit, &q);
            &(&q * &d_rho) * &q_inv
        }
        CoordKind::Q => {
            let (i, j) = idx.block;
            let n = t.total_size();
            let mut d_q = Mat::zeros(n, n);
            d_q[(t.offset(i) + s, t.offset(j) + col)] = GaussianRational::one();
            let shear = &d_q * &q_inv;
            let d_rho = rho_offdiagonal(c, &d_q);
            let moved = &(&q * &d_rho) * &q_inv;
            &(&(&shear * &a) - &(&a * &shear)) + &moved
        }
    };
    Ok(TangentVector { at: a, v })
}

/// Matrix of `X ↦ X·A − A·X` acting on row-major `vec(X)`.
fn commutator_operator(a: &Mat) -> Mat {
    let n = a.rows();
    let mut op = Mat::zeros(n * n, n * n);
    for r in 0..n {
        for c in 0..n {
            let row = r * n + c;
            for k in 0..n {
                // (X·A)_{rc} = Σ_k X_{rk} A_{kc}
                if !a[(k, c)].is_zero() {
                    op[(row, r * n + k)] += &a[(k, c)];
                }
                // (A·X)_{rc} = Σ_k A_{rk} X_{kc}
                if !a[(r, k)].is_zero() {
                    op[(row, k * n + c)] -= &a[(r, k)];
                }
            }
        }
    }
    op
}

/// Particular solutions `X_k` of `X_k·A − A·X_k = v_k`, one elimination for all.
pub fn solve_infinitesimal_many(a: &Mat, vs: &[Mat]) -> Result<Vec<Mat>, SymplecticError> {
    let n = a.rows();
    if !a.is_square() {
        return Err(LinalgError::NotSquare(a.rows(), a.cols()).into());
    }
    let mut rhs = Mat::zeros(n * n, vs.len());
    for (k, v) in vs.iter().enumerate() {
        if v.shape() != a.shape() {
            return Err(LinalgError::ShapeMismatch {
                op: "solve_infinitesimal",
                left: a.shape(),
                right: v.shape(),
            }
            .into());
        }
        for (e, x) in v.entries().iter().enumerate() {
            rhs[(e, k)] = x.clone();
        }
    }
    let sol = commutator_operator(a)
        .solve(&rhs)?
        .ok_or(SymplecticError::NotTangent)?;
    Ok((0..vs.len())
        .map(|k| Mat::from_fn(n, n, |r, c| sol[(r * n + c, k)].clone()))
        .collect())
}

pub fn solve_infinitesimal(a: &Mat, v: &Mat) -> Result<Mat, SymplecticError> {
    Ok(solve_infinitesimal_many(a, std::slice::from_ref(v))?
        .pop()
        .expect("one solution per rhs"))
}

/// Basis of the centralizer `{Z : Z·A = A·Z}`, the gauge freedom in
/// [`solve_infinitesimal`].
pub fn centralizer_basis(a: &Mat) -> Vec<Mat> {
    let n = a.rows();
    let k = commutator_operator(a).kernel_basis();
    (0..k.cols())
        .map(|col| Mat::from_fn(n, n, |r, c| k[(r * n + c, col)].clone()))
        .collect()
}

fn trace_of_product(x: &Mat, y: &Mat) -> GaussianRational {
    let n = x.rows();
    let mut acc = GaussianRational::zero();
    for r in 0..n {
        for k in 0..x.cols() {
            if !x[(r, k)].is_zero() && !y[(k, r)].is_zero() {
                acc += &(&x[(r, k)] * &y[(k, r)]);
            }
        }
    }
    acc
}

/// `ω(ξ₁, ξ₂) = −tr(X₁·ξ₂)` where `[X₁, A] = ξ₁`.
pub fn kks_form(t1: &TangentVector, t2: &TangentVector) -> Result<GaussianRational, SymplecticError> {
    if t1.at != t2.at {
        return Err(SymplecticError::BasePointMismatch);
    }
    let x1 = solve_infinitesimal(&t1.at, &t1.v)?;
    Ok(-trace_of_product(&x1, &t2.v))
}

/// The same form evaluated at the normal form: for `A = g·J·g⁻¹` and tangents
/// `ξ_k = [E_k, A]`, `ω = −tr(J·[g⁻¹E₁g, g⁻¹E₂g])`.
pub fn kks_form_at_normal_form(
    j: &Mat,
    g: &Mat,
    e1: &Mat,
    e2: &Mat,
) -> Result<GaussianRational, SymplecticError> {
    let g_inv = g.inverse()?;
    let pull = |e: &Mat| &(&g_inv * e) * g;
    let (f1, f2) = (pull(e1), pull(e2));
    let bracket = &(&f1 * &f2) - &(&f2 * &f1);
    Ok(-(j * &bracket).trace())
}

/// `tr b²₂₁b¹₁₂ − tr b²₁₂b¹₂₁` on the `(n, m)` block split.
pub fn aux_form(b1: &Mat, b2: &Mat, n: usize, m: usize) -> Result<GaussianRational, SymplecticError> {
    let size = n + m;
    for b in [b1, b2] {
        if b.shape() != (size, size) {
            return Err(LinalgError::ShapeMismatch {
                op: "aux_form",
                left: (size, size),
                right: b.shape(),
            }
            .into());
        }
    }
    let blk = |b: &Mat, r: std::ops::Range<usize>, c: std::ops::Range<usize>| {
        b.block(r, c).expect("shape checked")
    };
    let b1_12 = blk(b1, 0..n, n..size);
    let b1_21 = blk(b1, n..size, 0..n);
    let b2_12 = blk(b2, 0..n, n..size);
    let b2_21 = blk(b2, n..size, 0..n);
    Ok(trace_of_product(&b2_21, &b1_12) - trace_of_product(&b2_12, &b1_21))
}

/// The constant Darboux matrix: `(p_j^i)_{st}` pairs with `(q_i^j)_{ts}` to `+1`.
pub fn canonical_gram(t: &TypeSequence) -> Mat {
    let idx = enumerate_coordinates(t);
    let mut g = Mat::zeros(idx.len(), idx.len());
    for (a, ia) in idx.iter().enumerate() {
        if ia.kind != CoordKind::P {
            continue;
        }
        let partner = ia.conjugate();
        let b = idx
            .iter()
            .position(|ib| *ib == partner)
            .expect("every p-entry has a q partner");
        g[(a, b)] = GaussianRational::one();
        g[(b, a)] = -GaussianRational::one();
    }
    g
}

#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    pub enumeration: Vec<CoordinateIndex>,
    pub gram: Mat,
    pub canonical: Mat,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl GramReport {
    /// First `(row, col)` (0-based) where the computed and canonical matrices differ.
    pub fn first_mismatch(&self) -> Option<(usize, usize)> {
        let n = self.gram.rows();
        (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .find(|&pos| self.gram[pos] != self.canonical[pos])
    }
}

/// Form values between every pair of the given tangents at `a`.
pub fn gram_from_tangents(a: &Mat, tangents: &[Mat]) -> Result<Mat, SymplecticError> {
    let xs = solve_infinitesimal_many(a, tangents)?;
    let d = tangents.len();
    Ok(Mat::from_fn(d, d, |r, c| -trace_of_product(&xs[r], &tangents[c])))
}

pub fn coordinate_tangents(c: &CanonicalCoords) -> Result<(Mat, Vec<Mat>), SymplecticError> {
    let idx = enumerate_coordinates(c.type_seq());
    let mut at = None;
    let mut vs = Vec::with_capacity(idx.len());
    for i in &idx {
        let tv = coordinate_tangent(c, i)?;
        at.get_or_insert(tv.at);
        vs.push(tv.v);
    }
    let at = at.unwrap_or_else(|| crate::orbit::parameterize(c));
    Ok((at, vs))
}

/// Gram matrix of the form in the coordinate basis, compared with [`canonical_gram`].
pub fn gram_matrix(c: &CanonicalCoords) -> Result<GramReport, SymplecticError> {
    let (a, tangents) = coordinate_tangents(c)?;
    let gram = gram_from_tangents(&a, &tangents)?;
    Ok(report(c.type_seq(), gram))
}

pub(crate) fn report(t: &TypeSequence, gram: Mat) -> GramReport {
    let canonical = canonical_gram(t);
    GramReport {
        enumeration: enumerate_coordinates(t),
        matches: gram == canonical,
        gram,
        canonical,
    }
}

/// Wrap an externally computed Gram matrix (e.g. from perturbed tangents).
pub fn gram_report(t: &TypeSequence, gram: Mat) -> GramReport {
    report(t, gram)
}
