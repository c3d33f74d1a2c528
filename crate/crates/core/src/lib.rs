//! Exact homotopy transfer, operadic cohomology and formality obstructions
//! for finite-dimensional dg algebras over the rationals.

pub mod algebras;
pub mod enveloping;
pub mod error;
pub mod format;
pub mod formality;
pub mod graded;
pub mod homotopy;
pub mod linalg;
pub mod multilinear;
pub mod opcohomology;
pub mod perturbation;
pub mod perm;
pub mod report;
pub mod scalar;
pub mod symgroup;

pub use error::{Error, Result};
