//! Rank-based ground truth for Jordan structures.
//!
//! The Weyr characteristic `dim ker (A − λI)^k` is computed by exact rank of
//! successive powers; its first differences are the conjugate of the chain
//! lengths. Eigenvalues are always supplied by the caller.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::jordan::{conjugate_partition, EigenChains, JordanStructure};
use crate::linalg::Mat;
use crate::scalar::GaussianRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),
    #[error("{0} is not an eigenvalue (trivial kernel)")]
    NotAnEigenvalue(GaussianRational),
    #[error("supplied eigenvalues account for {found} of {expected} dimensions")]
    SpectrumMismatch { expected: usize, found: usize },
    #[error("eigenvalue {0} supplied twice")]
    DuplicateEigenvalue(GaussianRational),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeyrTable {
    pub eigenvalue: GaussianRational,
    /// `dims[k-1] = dim ker (A − λI)^k`, computed until it stabilizes or fills the space.
    pub dims: Vec<usize>,
}

impl WeyrTable {
    pub fn algebraic_multiplicity(&self) -> usize {
        self.dims.last().copied().unwrap_or(0)
    }

    /// Chain lengths, longest first.
    pub fn chains(&self) -> Vec<usize> {
        let mut prev = 0;
        let diffs: Vec<usize> = self
            .dims
            .iter()
            .map(|&d| {
                let step = d - prev;
                prev = d;
                step
            })
            .take_while(|&s| s > 0)
            .collect();
        conjugate_partition(&diffs)
    }
}

pub fn weyr(a: &Mat, lambda: &GaussianRational) -> Result<WeyrTable, OracleError> {
    if !a.is_square() {
        return Err(OracleError::NotSquare(a.rows(), a.cols()));
    }
    let n = a.rows();
    let shifted = a.shift(lambda);
    let mut power = shifted.clone();
    let mut dims = Vec::new();
    let mut prev = 0;
    loop {
        let d = n - power.rank();
        dims.push(d);
        if d == prev || d == n {
            break;
        }
        prev = d;
        power = &power * &shifted;
    }
    Ok(WeyrTable {
        eigenvalue: lambda.clone(),
        dims,
    })
}

/// Jordan structure of `a`, given its exact spectrum.
pub fn jordan_structure_of(
    a: &Mat,
    eigenvalues: &[GaussianRational],
) -> Result<JordanStructure, OracleError> {
    let tables = weyr_tables(a, eigenvalues)?;
    let mut total = 0;
    let mut entries = Vec::with_capacity(tables.len());
    for t in tables {
        if t.dims[0] == 0 {
            return Err(OracleError::NotAnEigenvalue(t.eigenvalue));
        }
        total += t.algebraic_multiplicity();
        entries.push(EigenChains {
            chains: t.chains(),
            value: t.eigenvalue,
        });
    }
    if total != a.rows() {
        return Err(OracleError::SpectrumMismatch {
            expected: a.rows(),
            found: total,
        });
    }
    Ok(JordanStructure::new(entries).expect("distinct eigenvalues with nonempty chains"))
}

fn weyr_tables(a: &Mat, eigenvalues: &[GaussianRational]) -> Result<Vec<WeyrTable>, OracleError> {
    for (k, l) in eigenvalues.iter().enumerate() {
        if eigenvalues[..k].contains(l) {
            return Err(OracleError::DuplicateEigenvalue(l.clone()));
        }
    }
    eigenvalues.iter().map(|l| weyr(a, l)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    #[serde(rename = "match")]
    pub matches: bool,
    pub expected: JordanStructure,
    /// Structure seen at the expected eigenvalues; eigenvalues with trivial
    /// kernel are omitted.
    pub found: JordanStructure,
    pub weyr: BTreeMap<String, Vec<usize>>,
}

/// Does `a` lie on the orbit of `j` (same Jordan structure)?
pub fn verify_on_orbit(a: &Mat, j: &JordanStructure) -> OrbitReport {
    let eigenvalues: Vec<GaussianRational> = j.eigenvalues().cloned().collect();
    let shape_ok = a.is_square() && a.rows() == j.total_size();
    let tables = if a.is_square() {
        weyr_tables(a, &eigenvalues).unwrap_or_default()
    } else {
        Vec::new()
    };
    let found = JordanStructure::new(
        tables
            .iter()
            .filter(|t| t.dims[0] > 0)
            .map(|t| EigenChains {
                value: t.eigenvalue.clone(),
                chains: t.chains(),
            })
            .collect(),
    )
    .unwrap_or_default();
    OrbitReport {
        matches: shape_ok && &found == j,
        expected: j.clone(),
        found,
        weyr: tables
            .into_iter()
            .map(|t| (t.eigenvalue.to_string(), t.dims))
            .collect(),
    }
}

pub fn is_on_orbit(a: &Mat, j: &JordanStructure) -> bool {
    verify_on_orbit(a, j).matches
}
