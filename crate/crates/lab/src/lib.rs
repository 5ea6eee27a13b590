//! File formats, seeded corpora, verifier registry and command-line front
//! end for `spaceform-core`.

pub mod cli;
pub mod config;
pub mod corpus;
pub mod io;
pub mod suite;

use std::path::Path;

/// Errors of the front end. Input problems map to exit status 2.
#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("{origin}: line {line}, column {column}: {message}")]
    Parse { origin: String, line: usize, column: usize, message: String },
    #[error("{origin}: {source}")]
    Body { origin: String, source: spaceform_core::Error },
    #[error("{0}")]
    Config(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Core(#[from] spaceform_core::Error),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl LabError {
    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        LabError::Io { path: path.display().to_string(), message: e.to_string() }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Parse { .. } | LabError::Body { .. } | LabError::Config(_) | LabError::Io { .. } => 2,
            LabError::Core(_) | LabError::Output(_) => 1,
        }
    }
}
