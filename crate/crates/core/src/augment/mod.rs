//! Symmetry-based data augmentation: measurement schemas compiled into exact
//! per-element transforms of a flat measurement row.

mod contact;
mod csv_io;
mod isometry;
mod plan;
mod schema;

pub use contact::{contact_state_rep, MAX_LEGS};
pub use csv_io::{read_csv, write_csv};
pub use isometry::{reflection, IsometrySet, ISOMETRY_TOL};
pub use plan::{compile_schema, AugmentationPlan};
pub use schema::{Field, FieldKind, MeasurementSchema, SymmetryContext, SymmetrySpec};

use thiserror::Error;

use crate::group::GroupError;

#[derive(Debug, Error)]
pub enum AugmentError {
    #[error("field {field:?}: {reason}")]
    Schema { field: String, reason: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("unknown group element {0}")]
    UnknownElement(usize),
    #[error("{0} legs is more than the {MAX_LEGS} supported for contact states")]
    TooManyLegs(usize),
    #[error("invalid isometry: {0}")]
    Isometry(String),
    #[error("CSV header column {column}: expected {expected:?}, got {got:?}")]
    HeaderMismatch { column: usize, expected: String, got: String },
    #[error("CSV: {0}")]
    Csv(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}
