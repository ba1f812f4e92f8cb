//! Symmetric sequences, their evaluation as analytic functors and the
//! composition product.

mod compose;
mod evaluate;
mod sequence;

use std::collections::BTreeMap;

pub use compose::{compose, product_tuples, set_partitions, Composite, CompositeEntry};
pub use evaluate::{evaluate, EvalBasis, Evaluation, OrbitCache};
pub use sequence::SymmetricSequence;

use crate::exactlin::GradedVectorSpace;
use crate::Result;

/// `Σ_d dim F(X)_d · t^d` through degree `cap`, as degree → dimension.
pub fn poincare_series(seq: &SymmetricSequence, input: &GradedVectorSpace, cap: i32) -> Result<BTreeMap<i32, usize>> {
    Ok(evaluate(seq, input, cap)?.space().series())
}
