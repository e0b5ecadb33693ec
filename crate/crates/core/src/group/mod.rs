//! Finite groups and their generalized-permutation representations.
//!
//! All algebra here is exact integer arithmetic on signed permutations.

mod builtin;
mod finite;
mod genperm;
mod rep;
mod spec;

pub use builtin::{builtin_group, make_cyclic, make_dihedral, make_klein_four};
pub use finite::{close_jointly, group_closure, FiniteGroup, DEFAULT_ORDER_CAP};
pub use genperm::GenPerm;
pub use rep::{HomomorphismReport, Representation};
pub use spec::RepSpec;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("closure exceeded {cap} elements; generators do not generate a finite group under the cap")]
    ClosureExceeded { cap: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("representations belong to different groups")]
    GroupMismatch,
    #[error("target is not a permutation of 0..{dim} (bad entry {entry})")]
    NotAPermutation { dim: usize, entry: usize },
    #[error("sign entry {index} is {value}, expected +1 or -1")]
    InvalidSign { index: usize, value: i64 },
    #[error("zero-dimensional representation")]
    EmptyDimension,
    #[error("no generators given")]
    NoGenerators,
    #[error("expected {expected} generator images, got {got}")]
    GeneratorCountMismatch { expected: usize, got: usize },
    #[error("generator images are not a homomorphism (fails at pair ({g}, {h}))")]
    NotAHomomorphism { g: usize, h: usize },
    #[error("unknown group element {0}")]
    UnknownElement(usize),
    #[error("unknown group name {0:?}")]
    UnknownGroup(String),
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("generator {index}{}: {reason}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    InvalidGenerator { index: usize, line: Option<usize>, reason: String },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}
