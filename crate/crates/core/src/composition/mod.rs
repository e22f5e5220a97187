//! Both directions of the composition theorem as constructions: the composed
//! adversary matrix (lower bound), the composed dual witness (upper bound),
//! and checks that compare them with direct solves.

mod checks;
mod index;
mod lower;
mod report;
mod upper;

pub use checks::{functional_composition_check, relational_composition_check, CompositionOptions, DirectMode};
pub use index::{canonical_positions, composition_label_permutation, invert_permutation, BlockIndex};
pub use lower::{compose_adversary_matrices, verify_composed_lower, LowerReport, LowerTolerances, NormBound};
pub use report::{Check, CompositionKind, CompositionReport};
pub use upper::{compose_dual_witnesses, INPUT_WITNESS_TOL};
