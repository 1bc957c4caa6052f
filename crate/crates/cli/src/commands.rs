use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::Path;

use orbitdx_core::oracle::{is_on_orbit, jordan_structure_of, weyr, OracleError};
use orbitdx_core::orbit::{extract as extract_in, extract_auto, parameterize};
use orbitdx_core::symplectic::{coordinate_tangents, enumerate_coordinates, gram_from_tangents, gram_report};
use orbitdx_core::{CanonicalCoords, Chart, GaussianRational, JordanStructure, Mat, Sampler, TypeSequence};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::error::{CliError, Result};
use crate::input::{self, Shape};

/// How many coordinate samples to draw before giving up on a generic point.
const ATTEMPTS: usize = 3;

#[derive(Clone, Debug)]
pub struct Randomness {
    pub seed: u64,
    pub bound: i64,
    pub complex: bool,
}

impl Randomness {
    fn sampler(&self) -> Sampler {
        Sampler::new(self.bound, self.complex)
    }

    fn rng(&self, offset: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(offset))
    }
}

fn emit<T: Serialize + ?Sized>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(CliError::input)?;
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::input(e)),
        _ => Ok(()),
    }
}

fn check_coords(shape: &Shape, c: &CanonicalCoords) -> Result<()> {
    let t = c.type_seq();
    if *t == shape.type_seq || (t.structure() == shape.structure && t.is_grouped()) {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "coordinates are for type sequence {}, structure file gives {}",
            describe(t),
            describe(&shape.type_seq)
        )))
    }
}

fn describe(t: &TypeSequence) -> String {
    let steps: Vec<String> = t.steps().iter().map(|s| format!("({}, {})", s.lambda, s.n)).collect();
    format!("[{}]", steps.join(", "))
}

/// Random coordinates whose image lies on the orbit itself.
fn generic_coords(shape: &Shape, random: &Randomness, rng: &mut ChaCha8Rng) -> Result<CanonicalCoords> {
    let sampler = random.sampler();
    for _ in 0..ATTEMPTS {
        let c = sampler.coords(&shape.type_seq, rng);
        if is_on_orbit(&parameterize(&c), &shape.structure) {
            return Ok(c);
        }
    }
    Err(CliError::Degenerate(format!(
        "{ATTEMPTS} coordinate samples (seed {}, bound {}) all fell off the orbit",
        random.seed, random.bound
    )))
}

fn first_difference(expected: &CanonicalCoords, found: &CanonicalCoords) -> Option<String> {
    enumerate_coordinates(expected.type_seq()).into_iter().find_map(|idx| {
        let (want, got) = (expected.get(&idx).ok()?, found.get(&idx).ok()?);
        (want != got).then(|| format!("{idx}: expected {want}, found {got}"))
    })
}

pub fn param(structure: Option<&Path>, coords: &Path) -> Result<()> {
    let c = input::coords(coords)?;
    if let Some(path) = structure {
        check_coords(&input::shape(path)?, &c)?;
    }
    emit(&parameterize(&c))
}

pub fn extract(structure: &Path, matrix: &Path, chart: &str) -> Result<()> {
    let shape = input::shape(structure)?;
    let a = input::matrix(matrix)?;
    let (c, chart) = if chart == "auto" {
        extract_auto(&shape.type_seq, &a)?
    } else {
        let chart = input::chart(Path::new(chart))?;
        (extract_in(&shape.type_seq, &a, &chart)?, chart)
    };
    emit(&json!({ "coords": c, "chart": chart }))
}

pub fn verify_darboux(
    structure: &Path,
    coords: Option<&Path>,
    random: &Randomness,
    corrupt_tangent: Option<usize>,
) -> Result<()> {
    let shape = input::shape(structure)?;
    let c = match coords {
        Some(path) => {
            let c = input::coords(path)?;
            check_coords(&shape, &c)?;
            c
        }
        None => generic_coords(&shape, random, &mut random.rng(0))?,
    };
    let (a, mut tangents) = coordinate_tangents(&c).map_err(|e| CliError::Mismatch(e.to_string()))?;
    if let Some(k) = corrupt_tangent {
        let v = tangents
            .get_mut(k)
            .ok_or_else(|| CliError::Input(format!("no tangent {k} to corrupt")))?;
        *v = v.scale(&GaussianRational::from_int(2));
    }
    let gram = gram_from_tangents(&a, &tangents).map_err(|e| CliError::Mismatch(e.to_string()))?;
    let report = gram_report(c.type_seq(), gram);
    emit(&report)?;
    match report.first_mismatch() {
        None => Ok(()),
        Some((r, col)) => Err(CliError::Mismatch(format!(
            "ω({}, {}) = {}, expected {}",
            report.enumeration[r], report.enumeration[col], report.gram[(r, col)], report.canonical[(r, col)]
        ))),
    }
}

pub fn project(structure: &Path, eigenvalue: &str) -> Result<()> {
    let shape = input::shape(structure)?;
    let lambda = input::scalar(eigenvalue)?;
    let projected = shape.structure.project(&lambda).map_err(CliError::input)?;
    emit(&projected)
}

#[derive(Serialize)]
struct BlockInfo {
    kind: &'static str,
    block: [usize; 2],
    shape: [usize; 2],
}

pub fn info(structure: &Path) -> Result<()> {
    let shape = input::shape(structure)?;
    let t = &shape.type_seq;
    let mut blocks = Vec::new();
    for j in 1..=t.len() {
        for i in j + 1..=t.len() {
            blocks.push(BlockInfo {
                kind: "q",
                block: [i, j],
                shape: [t.n(i), t.n(j)],
            });
            blocks.push(BlockInfo {
                kind: "p",
                block: [j, i],
                shape: [t.n(j), t.n(i)],
            });
        }
    }
    emit(&json!({
        "N": t.total_size(),
        "structure": shape.structure,
        "type_sequence": t,
        "orbit_dim": shape.structure.orbit_dim(),
        "coordinate_count": t.coordinate_count(),
        "blocks": blocks,
    }))
}

pub fn random_point(structure: &Path, conjugate: bool, random: &Randomness) -> Result<()> {
    let shape = input::shape(structure)?;
    let mut rng = random.rng(0);
    let a = if conjugate {
        random.sampler().conjugate_point(&shape.type_seq, &mut rng).0
    } else {
        parameterize(&generic_coords(&shape, random, &mut rng)?)
    };
    emit(&a)
}

pub fn jordan_verify(matrix: &Path, eigenvalues: &str, structure: Option<&Path>) -> Result<()> {
    let a = input::matrix(matrix)?;
    let lambdas = input::scalars(eigenvalues)?;
    let found = jordan_structure_of(&a, &lambdas).map_err(|e| match e {
        OracleError::SpectrumMismatch { .. } => CliError::Input(format!("spectrum mismatch: {e}")),
        other => CliError::input(other),
    })?;
    let mut tables = BTreeMap::new();
    for lambda in &lambdas {
        let w = weyr(&a, lambda).map_err(CliError::input)?;
        tables.insert(lambda.to_string(), w.dims);
    }
    let Some(path) = structure else {
        return emit(&json!({ "found": found, "weyr": tables }));
    };
    let expected: JordanStructure = input::shape(path)?.structure;
    let matches = expected == found;
    emit(&json!({ "match": matches, "expected": expected, "found": found, "weyr": tables }))?;
    if matches {
        Ok(())
    } else {
        Err(CliError::Mismatch("matrix has a different Jordan structure".into()))
    }
}

#[derive(Serialize)]
struct RoundtripSummary {
    trials: usize,
    passed: usize,
    degenerate: usize,
    non_identity_charts: usize,
}

fn corrupt(c: &mut CanonicalCoords) {
    if let Some(idx) = enumerate_coordinates(c.type_seq()).first() {
        let bumped = c.get(idx).expect("enumerated index") + &GaussianRational::from_int(1);
        c.set(idx, bumped).expect("enumerated index");
    }
}

pub fn roundtrip(structure: &Path, trials: usize, random: &Randomness, corrupt_extract: bool) -> Result<()> {
    let shape = input::shape(structure)?;
    let t = &shape.type_seq;
    let sampler = random.sampler();
    let identity = Chart::identity(t.total_size());
    let mut summary = RoundtripSummary {
        trials,
        passed: 0,
        degenerate: 0,
        non_identity_charts: 0,
    };
    let mut failure = None;
    for trial in 0..trials as u64 {
        let seed = random.seed.wrapping_add(trial);
        let mut rng = random.rng(trial);
        let fail = |what: String| CliError::Mismatch(format!("seed {seed}: {what}"));

        // coordinates -> matrix -> coordinates
        let c = sampler.coords(t, &mut rng);
        let a = parameterize(&c);
        if !is_on_orbit(&a, &shape.structure) {
            summary.degenerate += 1;
            continue;
        }
        let outcome = extract_in(t, &a, &identity)
            .map_err(|e| fail(format!("extract failed: {e}")))
            .and_then(|mut back| {
                if corrupt_extract {
                    corrupt(&mut back);
                }
                match first_difference(&c, &back) {
                    None => Ok(()),
                    Some(d) => Err(fail(format!("extract∘param differs at {d}"))),
                }
            })
            // matrix -> coordinates -> matrix, through whatever chart is needed
            .and_then(|()| {
                let (b, _) = sampler.conjugate_point(t, &mut rng);
                let (mut c2, chart) = extract_auto(t, &b).map_err(|e| fail(format!("extract failed: {e}")))?;
                summary.non_identity_charts += usize::from(!chart.is_identity());
                if corrupt_extract {
                    corrupt(&mut c2);
                }
                let rebuilt: Mat = chart.unapply(&parameterize(&c2)).map_err(CliError::input)?;
                if rebuilt == b {
                    Ok(())
                } else {
                    Err(fail("param∘extract does not reproduce the matrix".into()))
                }
            });
        match outcome {
            Ok(()) => summary.passed += 1,
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    emit(&summary)?;
    failure.map_or(Ok(()), Err)
}
