//! Loading the JSON payloads named on the command line.

use std::fs;
use std::path::Path;

use orbitdx_core::{CanonicalCoords, Chart, GaussianRational, JordanStructure, Mat, TypeSequence};
use serde::de::DeserializeOwned;

use crate::error::{CliError, Result};

/// A structure file holds either a Jordan structure or an explicit type
/// sequence; both resolve to the pair used by every command.
#[derive(Clone, Debug)]
pub struct Shape {
    pub structure: JordanStructure,
    pub type_seq: TypeSequence,
}

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {what} file {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{what} file {}: {e}", path.display())))
}

pub fn shape(path: &Path) -> Result<Shape> {
    let value: serde_json::Value = read_json(path, "structure")?;
    let bad = |e: serde_json::Error| CliError::Input(format!("structure file {}: {e}", path.display()));
    if value.get("steps").is_some() {
        let type_seq: TypeSequence = serde_json::from_value(value).map_err(bad)?;
        Ok(Shape {
            structure: type_seq.structure(),
            type_seq,
        })
    } else {
        let structure: JordanStructure = serde_json::from_value(value).map_err(bad)?;
        Ok(Shape {
            type_seq: structure.default_type_sequence(),
            structure,
        })
    }
}

pub fn coords(path: &Path) -> Result<CanonicalCoords> {
    read_json(path, "coordinates")
}

pub fn matrix(path: &Path) -> Result<Mat> {
    read_json(path, "matrix")
}

pub fn chart(path: &Path) -> Result<Chart> {
    read_json(path, "chart")
}

pub fn scalar(text: &str) -> Result<GaussianRational> {
    text.parse().map_err(CliError::input)
}

pub fn scalars(text: &str) -> Result<Vec<GaussianRational>> {
    text.split(',').filter(|s| !s.trim().is_empty()).map(scalar).collect()
}
