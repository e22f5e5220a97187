//! Dense real matrix algebra: symmetric eigendecomposition, norms, Hadamard
//! and Kronecker products, semidefiniteness tests, and the structured
//! matrices the composition construction is built from (hat matrices,
//! duplication lifts, matrix composition).

mod eigen;
mod matrix;
mod ops;

pub use eigen::{sym_eig, sym_eigenvalues, SymEig, SYMMETRY_TOL};
pub use matrix::{dot, norm_sq, DenseMatrix};
pub use ops::{
    cholesky, cholesky_solve, dilation, extreme_eigenvalues, hat, is_nsd, is_psd, kron,
    kron_fastest_first, lambda_max, lambda_min, lift_by_function, lower_triangular_inverse,
    matrix_composition, spd_inverse, spectral_norm, trace_norm, CompositionLabels, PsdCheck,
    COMPOSITION_MAX_DIM, KRON_MAX_DIM,
};
pub(crate) use ops::{composition_labels_for, lifted_hadamard};
