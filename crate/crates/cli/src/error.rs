use std::process::ExitCode;

use orbitdx_core::ExtractError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Extraction(String),
    #[error("{0}")]
    Residue(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("{0}")]
    Degenerate(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Input(_) => 2,
            CliError::Extraction(_) => 3,
            CliError::Residue(_) => 4,
            CliError::Mismatch(_) => 5,
            CliError::Degenerate(_) => 6,
        })
    }

    pub fn input(e: impl std::fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ExtractError> for CliError {
    fn from(e: ExtractError) -> Self {
        match e {
            ExtractError::Shape { .. } | ExtractError::Chart(_) => CliError::Input(e.to_string()),
            ExtractError::FinalResidue { .. } => CliError::Residue(e.to_string()),
            ExtractError::Flight { .. } | ExtractError::NoChart(_) => CliError::Extraction(e.to_string()),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
