//! Dense exact linear algebra over ℚ(i).
//!
//! Matrices are small (the commutator systems are at most a few hundred
//! unknowns), so everything is plain row-major storage with fraction-exact
//! Gauss-Jordan elimination. Pivots are the first nonzero entry in a column;
//! magnitude pivoting has no meaning over an exact field.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Range, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::GaussianRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),
    #[error("block rows {rows:?}, cols {cols:?} out of bounds for {shape:?}")]
    BlockOutOfRange {
        rows: Range<usize>,
        cols: Range<usize>,
        shape: (usize, usize),
    },
    #[error("malformed matrix: {0}")]
    Malformed(String),
}

/// Exact dense matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

/// Reduced row-echelon form together with its pivot columns (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Mat,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &GaussianRational::one())
    }

    /// `value · I_n`
    pub fn scalar(n: usize, value: &GaussianRational) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = value.clone();
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> GaussianRational,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<GaussianRational>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Malformed(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Build from nested rows. Panics on ragged input; intended for literals.
    pub fn from_rows<T: Into<GaussianRational> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix literal");
        Self::from_fn(r, c, |i, j| rows[i][j].clone().into())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[GaussianRational] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[GaussianRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn scale(&self, k: &GaussianRational) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn trace(&self) -> GaussianRational {
        (0..self.rows.min(self.cols)).map(|k| self[(k, k)].clone()).sum()
    }

    pub fn matmul(&self, rhs: &Mat) -> Result<Mat, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::ShapeMismatch {
                op: "matmul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if !b.is_zero() {
                        out.data[r * rhs.cols + c] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(
        &self,
        rhs: &Mat,
        op: &'static str,
        f: impl Fn(&GaussianRational, &GaussianRational) -> GaussianRational,
    ) -> Result<Mat, LinalgError> {
        if self.shape() != rhs.shape() {
            return Err(LinalgError::ShapeMismatch {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, rhs: &Mat) -> Result<Mat, LinalgError> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Mat) -> Result<Mat, LinalgError> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    /// `self − λ·I`
    pub fn shift(&self, lambda: &GaussianRational) -> Mat {
        let mut out = self.clone();
        for k in 0..self.rows.min(self.cols) {
            out[(k, k)] -= lambda;
        }
        out
    }

    /// `self·x − x·self`
    pub fn commutator(&self, x: &Mat) -> Result<Mat, LinalgError> {
        self.matmul(x)?.try_sub(&x.matmul(self)?)
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].inv().expect("pivot is nonzero");
            for c in col..m.cols {
                let v = &m[(row, c)] * &inv;
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    if m[(row, c)].is_zero() {
                        continue;
                    }
                    let delta = &factor * &m[(row, c)];
                    m[(r, c)] -= &delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        let rank = pivots.len();
        Rref {
            reduced: m,
            pivots,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Columns form a basis of the right null space; width is `cols − rank`.
    pub fn kernel_basis(&self) -> Mat {
        let Rref {
            reduced, pivots, ..
        } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Mat::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis[(f, k)] = GaussianRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                basis[(p, k)] = -&reduced[(r, f)];
            }
        }
        basis
    }

    pub fn is_lower_unitriangular(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                self[(r, r)].is_one() && (r + 1..self.cols).all(|c| self[(r, c)].is_zero())
            })
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                self[(r, r)].is_one() && (0..r).all(|c| self[(r, c)].is_zero())
            })
    }

    pub fn inverse(&self) -> Result<Mat, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        if self.is_lower_unitriangular() {
            return Ok(self.lower_unitriangular_inverse());
        }
        if self.is_upper_unitriangular() {
            return Ok(self.transpose().lower_unitriangular_inverse().transpose());
        }
        let n = self.rows;
        let aug = Mat::assemble(&[vec![self.clone(), Mat::identity(n)]])?;
        let Rref { reduced, rank, pivots } = aug.rref();
        if rank < n || pivots[n - 1] >= n {
            return Err(LinalgError::Singular);
        }
        reduced.block(0..n, n..2 * n)
    }

    /// Forward substitution; only ring operations, so integer input gives
    /// integer output.
    fn lower_unitriangular_inverse(&self) -> Mat {
        let n = self.rows;
        let mut inv = Mat::identity(n);
        for c in 0..n {
            for r in c + 1..n {
                let mut acc = GaussianRational::zero();
                for k in c..r {
                    if !self[(r, k)].is_zero() && !inv[(k, c)].is_zero() {
                        acc += &(&self[(r, k)] * &inv[(k, c)]);
                    }
                }
                inv[(r, c)] = -acc;
            }
        }
        inv
    }

    /// Some exact `x` with `self·x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &Mat) -> Result<Option<Mat>, LinalgError> {
        if self.rows != b.rows {
            return Err(LinalgError::ShapeMismatch {
                op: "solve",
                left: self.shape(),
                right: b.shape(),
            });
        }
        let n = self.cols;
        let aug = Mat::assemble(&[vec![self.clone(), b.clone()]])?;
        let Rref { reduced, pivots, .. } = aug.rref();
        if pivots.last().is_some_and(|&p| p >= n) {
            return Ok(None);
        }
        let mut x = Mat::zeros(n, b.cols);
        for (r, &p) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x[(p, c)] = reduced[(r, n + c)].clone();
            }
        }
        Ok(Some(x))
    }

    pub fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Result<Mat, LinalgError> {
        if rows.start > rows.end
            || cols.start > cols.end
            || rows.end > self.rows
            || cols.end > self.cols
        {
            return Err(LinalgError::BlockOutOfRange {
                rows,
                cols,
                shape: self.shape(),
            });
        }
        Ok(Mat::from_fn(rows.len(), cols.len(), |r, c| {
            self[(rows.start + r, cols.start + c)].clone()
        }))
    }

    /// Write `src` into `self` with its top-left corner at `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, src: &Mat) -> Result<(), LinalgError> {
        if row + src.rows > self.rows || col + src.cols > self.cols {
            return Err(LinalgError::BlockOutOfRange {
                rows: row..row + src.rows,
                cols: col..col + src.cols,
                shape: self.shape(),
            });
        }
        for r in 0..src.rows {
            for c in 0..src.cols {
                self[(row + r, col + c)] = src[(r, c)].clone();
            }
        }
        Ok(())
    }

    /// Assemble a grid of blocks. Every block in a grid row must share its
    /// row count and every block in a grid column its column count; empty
    /// blocks are fine as long as their shapes agree.
    pub fn assemble(grid: &[Vec<Mat>]) -> Result<Mat, LinalgError> {
        let Some(first) = grid.first() else {
            return Ok(Mat::zeros(0, 0));
        };
        let col_widths: Vec<usize> = first.iter().map(Mat::cols).collect();
        let mut row_heights = Vec::with_capacity(grid.len());
        for grid_row in grid {
            if grid_row.len() != col_widths.len() {
                return Err(LinalgError::Malformed("ragged block grid".into()));
            }
            let h = grid_row.first().map_or(0, Mat::rows);
            for (blk, &w) in grid_row.iter().zip(&col_widths) {
                if blk.shape() != (h, w) {
                    return Err(LinalgError::ShapeMismatch {
                        op: "assemble",
                        left: (h, w),
                        right: blk.shape(),
                    });
                }
            }
            row_heights.push(h);
        }
        let mut out = Mat::zeros(row_heights.iter().sum(), col_widths.iter().sum());
        let mut r0 = 0;
        for (grid_row, h) in grid.iter().zip(&row_heights) {
            let mut c0 = 0;
            for blk in grid_row {
                out.set_block(r0, c0, blk)?;
                c0 += blk.cols;
            }
            r0 += h;
        }
        Ok(out)
    }

    /// `P⁻¹·self·P` for the permutation matrix whose column `k` is `e_{perm[k]}`;
    /// entry `(r, c)` of the result is `self[(perm[r], perm[c])]`.
    pub fn permute_similar(&self, perm: &[usize]) -> Mat {
        Mat::from_fn(perm.len(), perm.len(), |r, c| self[(perm[r], perm[c])].clone())
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Mat {
        Mat::from_fn(perm.len(), self.cols, |r, c| self[(perm[r], c)].clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    pub fn to_nested(&self) -> Vec<Vec<GaussianRational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = GaussianRational;
    fn index(&self, (r, c): (usize, usize)) -> &GaussianRational {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of {}x{}", self.rows, self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut GaussianRational {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of {}x{}", self.rows, self.cols);
        &mut self.data[r * self.cols + c]
    }
}

// Operator forms panic on shape mismatch; the `try_*` / `matmul` methods report it.
impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.matmul(rhs).expect("matmul shape mismatch")
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        self.try_add(rhs).expect("add shape mismatch")
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        self.try_sub(rhs).expect("sub shape mismatch")
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        self.scale(&-GaussianRational::one())
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}", self.rows, self.cols)?;
        f.debug_list()
            .entries((0..self.rows).map(|r| self.row(r)))
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct MatJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<GaussianRational>>,
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.to_nested(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = MatJson::deserialize(deserializer)?;
        if raw.entries.len() != raw.rows || raw.entries.iter().any(|r| r.len() != raw.cols) {
            return Err(serde::de::Error::custom(format!(
                "entries do not form a {}x{} matrix",
                raw.rows, raw.cols
            )));
        }
        let data = raw.entries.into_iter().flatten().collect();
        Mat::from_vec(raw.rows, raw.cols, data).map_err(serde::de::Error::custom)
    }
}
