//! Shared fixtures: the four reference structures, their golden matrices written
//! out symbol by symbol, and an interpolation-based derivative oracle.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use orbitdx_core::orbit::{parameterize, CanonicalCoords};
use orbitdx_core::{GaussianRational, JordanStructure, Mat, TypeSequence};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type S = GaussianRational;

pub fn g(n: i64) -> S {
    S::from_int(n)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn structure(pairs: &[(i64, &[usize])]) -> JordanStructure {
    JordanStructure::from_pairs(pairs.iter().map(|(l, c)| (g(*l), c.to_vec()))).unwrap()
}

/// Four distinct simple eigenvalues.
pub fn example1() -> JordanStructure {
    structure(&[(4, &[1]), (3, &[1]), (2, &[1]), (1, &[1])])
}

/// Five distinct simple eigenvalues.
pub fn example2() -> JordanStructure {
    structure(&[(5, &[1]), (4, &[1]), (3, &[1]), (2, &[1]), (1, &[1])])
}

/// Nilpotent 4×4 Jordan box.
pub fn example3() -> JordanStructure {
    structure(&[(0, &[4])])
}

/// Chains (3, 2) at 0 and one unit chain at 1.
pub fn example4() -> JordanStructure {
    structure(&[(0, &[3, 2]), (1, &[1])])
}

pub fn examples() -> Vec<(&'static str, JordanStructure)> {
    vec![
        ("example1", example1()),
        ("example2", example2()),
        ("example3", example3()),
        ("example4", example4()),
    ]
}

/// Symbol table for one reference example: `q[k]`, `p[k]` are the
/// labels `q_k`, `p_k` (index 0 unused).
pub struct Labels {
    pub q: Vec<S>,
    pub p: Vec<S>,
}

impl Labels {
    pub fn random(count: usize, rng: &mut ChaCha8Rng) -> Self {
        use rand::Rng;
        // small rationals with non-trivial denominators
        let mut draw = || {
            let num: i64 = rng.random_range(-60..=60);
            let den: i64 = rng.random_range(1..=9);
            S::ratio(num, den)
        };
        Self {
            q: (0..=count).map(|_| draw()).collect(),
            p: (0..=count).map(|_| draw()).collect(),
        }
    }
}

fn scalar_block(x: &S) -> Mat {
    Mat::from_rows(&[vec![x.clone()]])
}

/// Coordinates for a sequence of unit steps where the label of the
/// pair `(p_j^i, q_i^j)` is `label(i, j)`.
pub fn unit_step_coords(t: &TypeSequence, labels: &Labels, label: impl Fn(usize, usize) -> usize) -> CanonicalCoords {
    let m = t.len();
    let mut q = BTreeMap::new();
    let mut p = BTreeMap::new();
    for j in 1..=m {
        for i in j + 1..=m {
            let l = label(i, j);
            q.insert((i, j), scalar_block(&labels.q[l]));
            p.insert((j, i), scalar_block(&labels.p[l]));
        }
    }
    CanonicalCoords::from_blocks(t.clone(), q, p).unwrap()
}

/// Label layout of the 4×4 examples: rows of `Q` read `q4; q5 q2; q6 q3 q1`.
pub fn label4(i: usize, j: usize) -> usize {
    match (i, j) {
        (2, 1) => 4,
        (3, 1) => 5,
        (3, 2) => 2,
        (4, 1) => 6,
        (4, 2) => 3,
        (4, 3) => 1,
        _ => unreachable!(),
    }
}

/// Label layout of the 5×5 example: `q7; q8 q4; q9 q5 q2; q10 q6 q3 q1`.
pub fn label5(i: usize, j: usize) -> usize {
    match (i, j) {
        (2, 1) => 7,
        (3, 1) => 8,
        (3, 2) => 4,
        (4, 1) => 9,
        (4, 2) => 5,
        (4, 3) => 2,
        (5, 1) => 10,
        (5, 2) => 6,
        (5, 3) => 3,
        (5, 4) => 1,
        _ => unreachable!(),
    }
}

fn m_of(rows: Vec<Vec<S>>) -> Mat {
    Mat::from_rows(&rows)
}

/// Golden `Q` of the 4×4 examples.
pub fn golden_q4(l: &Labels) -> Mat {
    let q = &l.q;
    let (o, z) = (g(1), g(0));
    m_of(vec![
        vec![o.clone(), z.clone(), z.clone(), z.clone()],
        vec![q[4].clone(), o.clone(), z.clone(), z.clone()],
        vec![q[5].clone(), q[2].clone(), o.clone(), z.clone()],
        vec![q[6].clone(), q[3].clone(), q[1].clone(), o],
    ])
}

/// Golden `Q⁻¹` of example1 (the expanded product).
pub fn golden_q4_inverse(l: &Labels) -> Mat {
    let q = &l.q;
    let (o, z) = (g(1), g(0));
    let r3c1 = -&q[5] + &q[4] * &q[2];
    let r4c1 = -&q[6] + &q[5] * &q[1] - &q[4] * &(-&q[3] + &q[1] * &q[2]);
    let r4c2 = -&q[3] + &q[1] * &q[2];
    m_of(vec![
        vec![o.clone(), z.clone(), z.clone(), z.clone()],
        vec![-&q[4], o.clone(), z.clone(), z.clone()],
        vec![r3c1, -&q[2], o.clone(), z.clone()],
        vec![r4c1, r4c2, -&q[1], o],
    ])
}

/// Factored form of example1's `Q⁻¹` (three elementary factors).
pub fn golden_q4_inverse_factors(l: &Labels) -> Mat {
    let q = &l.q;
    let mut f1 = Mat::identity(4);
    f1[(3, 2)] = -&q[1];
    let mut f2 = Mat::identity(4);
    f2[(2, 1)] = -&q[2];
    f2[(3, 1)] = -&q[3];
    let mut f3 = Mat::identity(4);
    f3[(1, 0)] = -&q[4];
    f3[(2, 0)] = -&q[5];
    f3[(3, 0)] = -&q[6];
    &(&f1 * &f2) * &f3
}

/// Golden `ρ` of the 4×4 examples with diagonal `(d1, d2, d3, d4)`.
pub fn golden_rho4(l: &Labels, diag: [S; 4]) -> Mat {
    let (q, p) = (&l.q, &l.p);
    let z = g(0);
    let [d1, d2, d3, d4] = diag;
    m_of(vec![
        vec![
            d1,
            &p[4] + &p[5] * &q[2] + &p[6] * &q[3],
            &p[5] + &p[6] * &q[1],
            p[6].clone(),
        ],
        vec![z.clone(), d2, &p[2] + &p[3] * &q[1], p[3].clone()],
        vec![z.clone(), z.clone(), d3, p[1].clone()],
        vec![z.clone(), z.clone(), z, d4],
    ])
}

/// Golden `Q` of the 5×5 example.
pub fn golden_q5(l: &Labels) -> Mat {
    let q = &l.q;
    let (o, z) = (g(1), g(0));
    m_of(vec![
        vec![o.clone(), z.clone(), z.clone(), z.clone(), z.clone()],
        vec![q[7].clone(), o.clone(), z.clone(), z.clone(), z.clone()],
        vec![q[8].clone(), q[4].clone(), o.clone(), z.clone(), z.clone()],
        vec![q[9].clone(), q[5].clone(), q[2].clone(), o.clone(), z.clone()],
        vec![q[10].clone(), q[6].clone(), q[3].clone(), q[1].clone(), o],
    ])
}

/// Golden `ρ` of the 5×5 example with diagonal `(d1, …, d5)`.
pub fn golden_rho5(l: &Labels, diag: [S; 5]) -> Mat {
    let (q, p) = (&l.q, &l.p);
    let z = g(0);
    let [d1, d2, d3, d4, d5] = diag;
    m_of(vec![
        vec![
            d1,
            &p[7] + &p[8] * &q[4] + &p[9] * &q[5] + &p[10] * &q[6],
            &p[8] + &p[9] * &q[2] + &p[10] * &q[3],
            &p[9] + &p[10] * &q[1],
            p[10].clone(),
        ],
        vec![
            z.clone(),
            d2,
            &p[4] + &p[5] * &q[2] + &p[6] * &q[3],
            &p[5] + &p[6] * &q[1],
            p[6].clone(),
        ],
        vec![z.clone(), z.clone(), d3, &p[2] + &p[3] * &q[1], p[3].clone()],
        vec![z.clone(), z.clone(), z.clone(), d4, p[1].clone()],
        vec![z.clone(), z.clone(), z.clone(), z, d5],
    ])
}

/// example4 coordinates: blocks read off the golden `Q` and `ρ`.
pub fn example4_coords(t: &TypeSequence, l: &Labels) -> CanonicalCoords {
    let (q, p) = (&l.q, &l.p);
    let mut qb = BTreeMap::new();
    qb.insert((2, 1), m_of(vec![vec![q[10].clone(), q[6].clone()], vec![q[11].clone(), q[7].clone()]]));
    qb.insert((3, 1), m_of(vec![vec![q[12].clone(), q[8].clone()]]));
    qb.insert((3, 2), m_of(vec![vec![q[4].clone(), q[2].clone()]]));
    qb.insert((4, 1), m_of(vec![vec![q[13].clone(), q[9].clone()]]));
    qb.insert((4, 2), m_of(vec![vec![q[5].clone(), q[3].clone()]]));
    qb.insert((4, 3), m_of(vec![vec![q[1].clone()]]));
    let mut pb = BTreeMap::new();
    pb.insert((1, 2), m_of(vec![vec![p[10].clone(), p[11].clone()], vec![p[6].clone(), p[7].clone()]]));
    pb.insert((1, 3), m_of(vec![vec![p[12].clone()], vec![p[8].clone()]]));
    pb.insert((1, 4), m_of(vec![vec![p[13].clone()], vec![p[9].clone()]]));
    pb.insert((2, 3), m_of(vec![vec![p[4].clone()], vec![p[2].clone()]]));
    pb.insert((2, 4), m_of(vec![vec![p[5].clone()], vec![p[3].clone()]]));
    pb.insert((3, 4), m_of(vec![vec![p[1].clone()]]));
    CanonicalCoords::from_blocks(t.clone(), qb, pb).unwrap()
}

/// Golden `Q` of example4.
pub fn golden_q6(l: &Labels) -> Mat {
    let q = &l.q;
    let (o, z) = (g(1), g(0));
    m_of(vec![
        vec![o.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), o.clone(), z.clone(), z.clone(), z.clone(), z.clone()],
        vec![q[10].clone(), q[6].clone(), o.clone(), z.clone(), z.clone(), z.clone()],
        vec![q[11].clone(), q[7].clone(), z.clone(), o.clone(), z.clone(), z.clone()],
        vec![q[12].clone(), q[8].clone(), q[4].clone(), q[2].clone(), o.clone(), z.clone()],
        vec![q[13].clone(), q[9].clone(), q[5].clone(), q[3].clone(), q[1].clone(), o],
    ])
}

/// Golden `ρ` of example4.
pub fn golden_rho6(l: &Labels) -> Mat {
    let (q, p) = (&l.q, &l.p);
    let z = g(0);
    m_of(vec![
        vec![
            z.clone(),
            z.clone(),
            &p[10] + &p[12] * &q[4] + &p[13] * &q[5],
            &p[11] + &p[12] * &q[2] + &p[13] * &q[3],
            &p[12] + &p[13] * &q[1],
            p[13].clone(),
        ],
        vec![
            z.clone(),
            z.clone(),
            &p[6] + &p[8] * &q[4] + &p[9] * &q[5],
            &p[7] + &p[8] * &q[2] + &p[9] * &q[3],
            &p[8] + &p[9] * &q[1],
            p[9].clone(),
        ],
        vec![z.clone(), z.clone(), z.clone(), z.clone(), &p[4] + &p[5] * &q[1], p[5].clone()],
        vec![z.clone(), z.clone(), z.clone(), z.clone(), &p[2] + &p[3] * &q[1], p[3].clone()],
        vec![z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), p[1].clone()],
        vec![z.clone(), z.clone(), z.clone(), z.clone(), z, g(1)],
    ])
}

/// Exact derivative at `t = 0` of a matrix polynomial of degree `< nodes`
/// sampled at `t = 0, 1, …, nodes − 1`, via Lagrange weights `L_k′(0)`.
pub fn polynomial_derivative_at_zero(samples: &[Mat]) -> Mat {
    let nodes = samples.len() as i64;
    let mut out = Mat::zeros(samples[0].rows(), samples[0].cols());
    for (k, y) in (0..nodes).zip(samples) {
        let w = if k == 0 {
            (1..nodes).map(|m| S::ratio(-1, m)).fold(S::zero(), |a, b| a + b)
        } else {
            let mut num = S::one();
            for m in (1..nodes).filter(|&m| m != k) {
                num = num * g(-m);
            }
            let mut den = S::one();
            for m in (0..nodes).filter(|&m| m != k) {
                den = den * g(k - m);
            }
            num / den
        };
        out = &out + &y.scale(&w);
    }
    out
}

/// `∂A/∂x` for one coordinate, by interpolating `A(c + t·e_x)` exactly.
pub fn interpolated_tangent(c: &CanonicalCoords, idx: &orbitdx_core::CoordinateIndex) -> Mat {
    // A is a polynomial of degree ≤ 3 in any single coordinate; extra nodes are harmless.
    let nodes = 7;
    let base = c.get(idx).unwrap().clone();
    let samples: Vec<Mat> = (0..nodes)
        .map(|k| {
            let mut shifted = c.clone();
            shifted.set(idx, &base + &g(k)).unwrap();
            parameterize(&shifted)
        })
        .collect();
    polynomial_derivative_at_zero(&samples)
}
