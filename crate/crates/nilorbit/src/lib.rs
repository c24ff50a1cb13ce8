//! Exact linear algebra for nilpotent orbits, relative weight filtrations,
//! Deligne systems and limiting mixed Hodge structures.
//!
//! All arithmetic is exact: the scalar field is generic over [`Field`], with
//! [`Rational`] for real data and [`Gaussian`] for complexified data.

pub mod classify;
pub mod deligne;
pub mod diagrams;
pub mod exact;
pub mod filtrations;
pub mod fixtures;
pub mod hodge;
pub mod report;
pub mod sl2;
pub mod weight2;

pub use exact::{Field, Gaussian, Mat, Rational, Subspace};

/// Real matrices.
pub type QMat = Mat<Rational>;
/// Complexified matrices.
pub type GMat = Mat<Gaussian>;
pub type QSubspace = Subspace<Rational>;
pub type GSubspace = Subspace<Gaussian>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
