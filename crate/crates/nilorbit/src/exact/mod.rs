//! Exact scalars, dense matrices, subspaces and forms.

pub mod cone;
pub mod field;
pub mod form;
pub mod mat;
pub mod subspace;
pub mod text;

pub use field::{Field, Gaussian, Rational};
pub use form::{signature, Signature};
pub use mat::{Mat, Solution};
pub use subspace::Subspace;
