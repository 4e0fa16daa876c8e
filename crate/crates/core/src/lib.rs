//! Exact computations with braces on operads and endomorphism operads:
//! Hochschild-type cohomology windows, obstruction theory for
//! A∞-structures, Massey products and blocking criteria.

pub mod ainfty;
pub mod algebra;
pub mod braces;
pub mod complexes;
pub mod criteria;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod graded;
pub mod linalg;
pub mod massey;
pub mod obstruction;
pub mod operad;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use graded::{DegreeWindow, GradedSpace};
