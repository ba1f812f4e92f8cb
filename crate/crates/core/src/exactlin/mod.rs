//! Exact rational linear algebra over integer-graded vector spaces.

mod echelon;
mod graded;
mod matrix;
mod scalar;
mod sparse;

pub use echelon::Echelon;
pub use graded::{
    kernel_cokernel, koszul_sign, solve_section, swap_map, tensor_product, GradedLinearMap,
    GradedVectorSpace, KernelCokernel, SignRule, TensorProduct,
};
pub use matrix::Matrix;
pub use scalar::Scalar;
pub use sparse::{Accumulator, SparseVec};
