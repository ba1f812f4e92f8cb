//! Operads: structure maps, law checks, builtins, free and quadratic operads.

mod action;
mod builtin;
mod free;
mod operad;
mod poisson;
mod quadratic;

pub use free::{free_operad, FreeOperad, Tree};
pub use action::{free_action, is_primitively_generated, PrimGenReport};
pub(crate) use action::nondecreasing_tuples;
pub use quadratic::{quadratic_operad, quotient_operad, QuadraticOperad, QuotientOperad};
pub use builtin::{assoc, builtin_operad, com, lie, lie_to_assoc, poisson};
pub use operad::{
    block_placement, check_operad_laws, signatures, LawViolation, MorphismViolation, Operad, OperadMorphism,
    Signature,
};
