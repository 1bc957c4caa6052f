//! Exact Darboux coordinates on coadjoint orbits of `GL(N, ℂ)`.
//!
//! For a Jordan structure `J` the orbit `O(J)` of all matrices similar to `J`
//! carries a canonical symplectic form. This crate builds an explicit
//! birational chart on it: coordinate blocks `(q, p)` map to a matrix by
//! `A = Q·ρ·Q⁻¹` ([`orbit::parameterize`]), the matrix maps back by peeling
//! eigenspaces one step at a time ([`orbit::extract`]), and the form's Gram
//! matrix in these coordinates is the constant Darboux matrix
//! ([`symplectic::gram_matrix`]).
//!
//! All arithmetic is exact over the Gaussian rationals ℚ(i).

// errors carry exact scalars and matrices for diagnostics
#![allow(clippy::result_large_err)]

pub mod jordan;
pub mod linalg;
pub mod oracle;
pub mod orbit;
pub mod sample;
pub mod scalar;
pub mod symplectic;

pub use jordan::{EigenChains, JordanError, JordanStructure, Step, TypeSequence};
pub use linalg::{LinalgError, Mat, Rref};
pub use oracle::{OrbitReport, OracleError, WeyrTable};
pub use orbit::{CanonicalCoords, Chart, ChartError, CoordsError, ExtractError, Flight, FlightError};
pub use sample::Sampler;
pub use scalar::{GaussianRational, ScalarError};
pub use symplectic::{CoordKind, CoordinateIndex, GramReport, SymplecticError, TangentVector};
