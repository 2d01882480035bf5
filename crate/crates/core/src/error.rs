use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::current::CurrentError;
use crate::prony::ReconstructError;
use crate::radon::RadonError;
use crate::residue::ResidueError;
use crate::trace::TraceError;

/// Malformed JSON input; `field` is the location of the offending value.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid `{field}`: {message}")]
pub struct SchemaError {
    pub field: String,
    pub message: String,
}

impl SchemaError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        SchemaError {
            field: field.into(),
            message: message.into(),
        }
    }
}

/// Any error raised by the toolkit, tagged with the module it came from.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exact-algebra: {0}")]
    Algebra(#[from] AlgebraError),
    #[error("residue-core: {0}")]
    Residue(#[from] ResidueError),
    #[error("current-model: {0}")]
    Current(#[from] CurrentError),
    #[error("trace-engine: {0}")]
    Trace(#[from] TraceError),
    #[error("prony-reconstruct: {0}")]
    Reconstruct(#[from] ReconstructError),
    #[error("radon-transform: {0}")]
    Radon(#[from] RadonError),
    #[error("schema: {0}")]
    Schema(#[from] SchemaError),
}
