//! Exact structure-constant computations for transposed Novikov-Poisson
//! algebras and their relatives (Novikov, transposed Poisson, right
//! differential Novikov-Poisson).
//!
//! Everything is exact: scalars are arbitrary-precision rationals or residues
//! modulo an odd prime, and every check runs over basis tuples.

pub mod affinize;
pub mod algcore;
pub mod catalog;
pub mod constructions;
pub mod exactfield;
pub mod json;
pub mod linsolve;
pub mod search;

pub use algcore::{Algebra, AxiomId, BilinearOp, CheckReport, IdentityId, Matrix, OpName, Vector};
pub use exactfield::{Field, Scalar};
pub use linsolve::{LinearMapSpace, Subspace};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0} is not an odd prime")]
    InvalidModulus(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("product of basis elements {0} and {1} is masked")]
    Masked(usize, usize),
    #[error("algebra has no {0} operation")]
    MissingOp(OpName),
    #[error("identity requires an auxiliary linear map")]
    MissingAux,
    #[error("partially defined algebra: {0}")]
    Partial(String),
    #[error("{0}")]
    Hypothesis(String),
    #[error("bound exceeded: {0}")]
    Bound(String),
    #[error("unknown catalog entry {0}")]
    UnknownEntry(String),
    #[error("bad parameter: {0}")]
    Param(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// `hypothesis <cond> violated`
pub(crate) fn violated(cond: &str) -> Error {
    Error::Hypothesis(format!("hypothesis {cond} violated"))
}
