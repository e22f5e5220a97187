//! Dense block-diagonal semidefinite programming: a problem builder, a
//! primal-dual interior-point solver, and Gram factorization for turning
//! solved Gram matrices back into vectors.

mod gram;
mod problem;
mod solver;

pub use gram::{gram_reconstruction_error, gram_to_vectors, gram_to_vectors_with_cutoff};
pub use problem::{Constraint, Entry, SdpProblem, Sense};
pub use solver::{
    solve, IterateRecord, SdpSolution, SolveStatus, SolverOptions, DEFAULT_MAX_CONSTRAINTS,
    DEFAULT_MAX_DIM, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
