//! Jordan structures and the step sequences that drive the orbit hierarchy.
//!
//! A [`JordanStructure`] lists, per eigenvalue, the lengths of its Jordan
//! chains. A [`TypeSequence`] is the same information laid out as the block
//! sizes of the coordinate chart: eigenvalue `λ` appears once per unit of its
//! longest chain, and the `i`-th occurrence records how many of its chains
//! have length at least `i`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Mat;
use crate::scalar::GaussianRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JordanError {
    #[error("{0} is not an eigenvalue of the structure")]
    NotAnEigenvalue(GaussianRational),
    #[error("eigenvalue {0} listed twice")]
    DuplicateEigenvalue(GaussianRational),
    #[error("eigenvalue {0} has no chains")]
    EmptyChains(GaussianRational),
    #[error("eigenvalue {0} has a chain of length 0")]
    ZeroLengthChain(GaussianRational),
    #[error("eigenvalue order is not a permutation of the spectrum")]
    OrderNotPermutation,
    #[error("step {0} has n = 0")]
    ZeroStep(usize),
    #[error("block sizes of eigenvalue {0} increase along the sequence")]
    NonMonotone(GaussianRational),
}

/// Chains of one eigenvalue, stored non-increasing.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EigenChains {
    pub value: GaussianRational,
    pub chains: Vec<usize>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct JordanStructure {
    eigenvalues: Vec<EigenChains>,
}

#[derive(Deserialize)]
struct StructureJson {
    eigenvalues: Vec<EigenChains>,
}

impl<'de> Deserialize<'de> for JordanStructure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = StructureJson::deserialize(d)?;
        JordanStructure::new(raw.eigenvalues).map_err(serde::de::Error::custom)
    }
}

/// Equality ignores the order in which eigenvalues are listed.
impl PartialEq for JordanStructure {
    fn eq(&self, other: &Self) -> bool {
        self.eigenvalues.len() == other.eigenvalues.len()
            && self
                .eigenvalues
                .iter()
                .all(|e| other.chains_of(&e.value) == Some(e.chains.as_slice()))
    }
}

impl Eq for JordanStructure {}

impl JordanStructure {
    pub fn new(eigenvalues: Vec<EigenChains>) -> Result<Self, JordanError> {
        let mut out: Vec<EigenChains> = Vec::with_capacity(eigenvalues.len());
        for mut e in eigenvalues {
            if out.iter().any(|o| o.value == e.value) {
                return Err(JordanError::DuplicateEigenvalue(e.value));
            }
            if e.chains.is_empty() {
                return Err(JordanError::EmptyChains(e.value));
            }
            if e.chains.contains(&0) {
                return Err(JordanError::ZeroLengthChain(e.value));
            }
            e.chains.sort_unstable_by(|a, b| b.cmp(a));
            out.push(e);
        }
        Ok(Self { eigenvalues: out })
    }

    /// Convenience constructor from `(eigenvalue, chains)` pairs.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, JordanError>
    where
        I: IntoIterator<Item = (GaussianRational, Vec<usize>)>,
    {
        Self::new(
            pairs
                .into_iter()
                .map(|(value, chains)| EigenChains { value, chains })
                .collect(),
        )
    }

    pub fn eigenvalues(&self) -> impl Iterator<Item = &GaussianRational> {
        self.eigenvalues.iter().map(|e| &e.value)
    }

    pub fn entries(&self) -> &[EigenChains] {
        &self.eigenvalues
    }

    pub fn chains_of(&self, lambda: &GaussianRational) -> Option<&[usize]> {
        self.eigenvalues
            .iter()
            .find(|e| &e.value == lambda)
            .map(|e| e.chains.as_slice())
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn total_size(&self) -> usize {
        self.eigenvalues.iter().flat_map(|e| &e.chains).sum()
    }

    /// Shorten every chain of `lambda` by one, dropping chains that vanish.
    pub fn project(&self, lambda: &GaussianRational) -> Result<Self, JordanError> {
        if self.chains_of(lambda).is_none() {
            return Err(JordanError::NotAnEigenvalue(lambda.clone()));
        }
        let eigenvalues = self
            .eigenvalues
            .iter()
            .filter_map(|e| {
                if &e.value != lambda {
                    return Some(e.clone());
                }
                let chains: Vec<usize> =
                    e.chains.iter().filter(|&&l| l > 1).map(|l| l - 1).collect();
                (!chains.is_empty()).then(|| EigenChains {
                    value: e.value.clone(),
                    chains,
                })
            })
            .collect();
        Ok(Self { eigenvalues })
    }

    /// Steps grouped by eigenvalue, groups in the given order.
    pub fn type_sequence(&self, order: &[GaussianRational]) -> Result<TypeSequence, JordanError> {
        let is_perm = order.len() == self.eigenvalues.len()
            && order.iter().all(|l| self.chains_of(l).is_some())
            && order
                .iter()
                .enumerate()
                .all(|(k, l)| !order[..k].contains(l));
        if !is_perm {
            return Err(JordanError::OrderNotPermutation);
        }
        let mut steps = Vec::new();
        for lambda in order {
            let chains = self.chains_of(lambda).expect("checked above");
            steps.extend(conjugate_partition(chains).into_iter().map(|n| Step {
                lambda: lambda.clone(),
                n,
            }));
        }
        Ok(TypeSequence { steps })
    }

    /// Type sequence in the order the eigenvalues were listed.
    pub fn default_type_sequence(&self) -> TypeSequence {
        let order: Vec<GaussianRational> = self.eigenvalues().cloned().collect();
        self.type_sequence(&order).expect("own spectrum is a permutation")
    }

    /// Dimension of the orbit: `N² − Σ_λ Σ_{a,b} min(ℓ_a, ℓ_b)`.
    pub fn orbit_dim(&self) -> usize {
        let n = self.total_size();
        let centralizer: usize = self
            .eigenvalues
            .iter()
            .map(|e| {
                e.chains
                    .iter()
                    .flat_map(|a| e.chains.iter().map(move |b| (*a).min(*b)))
                    .sum::<usize>()
            })
            .sum();
        n * n - centralizer
    }
}

/// Conjugate (transposed) partition: entry `i` counts parts `≥ i + 1`.
pub fn conjugate_partition(parts: &[usize]) -> Vec<usize> {
    let longest = parts.iter().copied().max().unwrap_or(0);
    (1..=longest)
        .map(|i| parts.iter().filter(|&&p| p >= i).count())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub lambda: GaussianRational,
    pub n: usize,
}

/// Ordered `(λ′_k, n_k)` pairs, `k = 1..M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeSequence {
    steps: Vec<Step>,
}

#[derive(Deserialize)]
struct TypeSequenceJson {
    steps: Vec<Step>,
}

impl<'de> Deserialize<'de> for TypeSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = TypeSequenceJson::deserialize(d)?;
        TypeSequence::new(raw.steps).map_err(serde::de::Error::custom)
    }
}

impl TypeSequence {
    pub fn new(steps: Vec<Step>) -> Result<Self, JordanError> {
        if let Some(k) = steps.iter().position(|s| s.n == 0) {
            return Err(JordanError::ZeroStep(k + 1));
        }
        for (k, s) in steps.iter().enumerate() {
            let prev = steps[..k].iter().rev().find(|p| p.lambda == s.lambda);
            if prev.is_some_and(|p| p.n < s.n) {
                return Err(JordanError::NonMonotone(s.lambda.clone()));
            }
        }
        Ok(Self { steps })
    }

    pub fn from_pairs<I>(pairs: I) -> Result<Self, JordanError>
    where
        I: IntoIterator<Item = (GaussianRational, usize)>,
    {
        Self::new(
            pairs
                .into_iter()
                .map(|(lambda, n)| Step { lambda, n })
                .collect(),
        )
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Number of steps `M`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `n_k`, 1-based.
    pub fn n(&self, k: usize) -> usize {
        self.steps[k - 1].n
    }

    /// `λ′_k`, 1-based.
    pub fn lambda(&self, k: usize) -> &GaussianRational {
        &self.steps[k - 1].lambda
    }

    /// Row/column offset of block `k` (1-based) in an `N×N` matrix.
    pub fn offset(&self, k: usize) -> usize {
        self.steps[..k - 1].iter().map(|s| s.n).sum()
    }

    pub fn total_size(&self) -> usize {
        self.steps.iter().map(|s| s.n).sum()
    }

    /// `2·Σ_{j<i} n_i n_j`, the number of scalar coordinates.
    pub fn coordinate_count(&self) -> usize {
        let mut acc = 0;
        for i in 1..=self.len() {
            for j in 1..i {
                acc += self.n(i) * self.n(j);
            }
        }
        2 * acc
    }

    /// True when all occurrences of each eigenvalue are adjacent.
    pub fn is_grouped(&self) -> bool {
        self.steps.iter().enumerate().all(|(k, s)| {
            match self.steps[..k].iter().rposition(|p| p.lambda == s.lambda) {
                Some(prev) => prev + 1 == k,
                None => true,
            }
        })
    }

    /// The steps after the first one, i.e. the sequence of `J∖{λ′₁}`.
    pub fn tail(&self) -> TypeSequence {
        TypeSequence {
            steps: self.steps.get(1..).unwrap_or_default().to_vec(),
        }
    }

    /// Recover the Jordan structure: the block sizes of each eigenvalue are
    /// the conjugate partition of its chain lengths.
    pub fn structure(&self) -> JordanStructure {
        let mut eigenvalues: Vec<EigenChains> = Vec::new();
        let mut sizes: Vec<Vec<usize>> = Vec::new();
        for s in &self.steps {
            match eigenvalues.iter().position(|e| e.value == s.lambda) {
                Some(idx) => sizes[idx].push(s.n),
                None => {
                    eigenvalues.push(EigenChains {
                        value: s.lambda.clone(),
                        chains: Vec::new(),
                    });
                    sizes.push(vec![s.n]);
                }
            }
        }
        for (e, n) in eigenvalues.iter_mut().zip(&sizes) {
            // n is non-increasing (checked in `new`), so its conjugate is the chain list
            e.chains = conjugate_partition(n);
        }
        JordanStructure { eigenvalues }
    }

    /// A matrix with Jordan structure [`Self::structure`] whose basis is
    /// ordered along the steps: block `k` holds the `k`-th vectors of the
    /// chains still alive at that step, and consecutive occurrences of an
    /// eigenvalue are linked by the inclusion `[I; 0]`. Flights with the
    /// identity chart peel it off block by block.
    pub fn jordan_matrix(&self) -> Mat {
        let n = self.total_size();
        let mut a = Mat::zeros(n, n);
        for k in 1..=self.len() {
            let off = self.offset(k);
            for d in 0..self.n(k) {
                a[(off + d, off + d)] = self.lambda(k).clone();
            }
            let next = (k + 1..=self.len()).find(|&i| self.lambda(i) == self.lambda(k));
            if let Some(i) = next {
                let col = self.offset(i);
                for d in 0..self.n(i) {
                    a[(off + d, col + d)] = GaussianRational::from_int(1);
                }
            }
        }
        a
    }
}

pub fn structure_from_sequence(t: &TypeSequence) -> JordanStructure {
    t.structure()
}
