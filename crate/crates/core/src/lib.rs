//! Exact computer algebra for operads, analytic functors and their towers.
//!
//! Everything is computed over the rationals with no rounding. Spaces are
//! finite-dimensional and integer graded; infinite objects are handled through
//! an arity cap together with an internal degree cap.

pub mod error;
pub mod exactlin;
pub mod symrep;
pub mod symseq;
pub mod operads;
pub mod calculus;
pub mod triples;
pub mod algebras;

pub use error::{Error, Result};
