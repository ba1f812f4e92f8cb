//! Representations of symmetric groups by adjacent-transposition generators.

mod module;
mod perm;

pub use module::{
    check_arity, coinvariants_from_average, group_order, shuffles, Coinvariants, RelationViolation,
    SymGroupModule, DEFAULT_ARITY_CAP,
};
pub use perm::{factorial, Permutation};
