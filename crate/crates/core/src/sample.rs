//! Seeded random points for tests, benchmarks and the CLI.
//!
//! Integers are drawn uniformly from `[−bound, bound]`; with `complex` the
//! imaginary part is drawn the same way, otherwise it is zero.

use rand::Rng;

use crate::jordan::TypeSequence;
use crate::linalg::Mat;
use crate::orbit::CanonicalCoords;
use crate::scalar::GaussianRational;
use crate::symplectic::enumerate_coordinates;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampler {
    pub bound: i64,
    pub complex: bool,
}

impl Default for Sampler {
    fn default() -> Self {
        Self {
            bound: 10_000,
            complex: false,
        }
    }
}

impl Sampler {
    pub fn new(bound: i64, complex: bool) -> Self {
        Self { bound, complex }
    }

    pub fn scalar<R: Rng + ?Sized>(&self, rng: &mut R) -> GaussianRational {
        let b = self.bound.abs();
        let re = rng.random_range(-b..=b);
        let im = if self.complex { rng.random_range(-b..=b) } else { 0 };
        GaussianRational::complex(re, im)
    }

    pub fn coords<R: Rng + ?Sized>(&self, t: &TypeSequence, rng: &mut R) -> CanonicalCoords {
        let values = enumerate_coordinates(t).iter().map(|_| self.scalar(rng)).collect();
        CanonicalCoords::from_values(t.clone(), values).expect("one value per coordinate")
    }

    pub fn matrix<R: Rng + ?Sized>(&self, rows: usize, cols: usize, rng: &mut R) -> Mat {
        Mat::from_fn(rows, cols, |_, _| self.scalar(rng))
    }

    /// `L·U` with random integer off-diagonal entries; always invertible.
    pub fn unitriangular_product<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Mat {
        let mut lower = Mat::identity(n);
        let mut upper = Mat::identity(n);
        for r in 0..n {
            for c in 0..r {
                lower[(r, c)] = self.scalar(rng);
                upper[(c, r)] = self.scalar(rng);
            }
        }
        &lower * &upper
    }

    /// `(g·J·g⁻¹, g)` with `J` the normal form for `t` and `g` from
    /// [`Self::unitriangular_product`].
    pub fn conjugate_point<R: Rng + ?Sized>(&self, t: &TypeSequence, rng: &mut R) -> (Mat, Mat) {
        let j = t.jordan_matrix();
        let g = self.unitriangular_product(j.rows(), rng);
        let g_inv = g.inverse().expect("unitriangular product is invertible");
        (&(&g * &j) * &g_inv, g)
    }
}
