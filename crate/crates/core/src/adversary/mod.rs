//! The functional and relational adversary programs: primal matrices and
//! their values, dual witnesses and their checkers, Gram-program solves, the
//! filtered γ₂ norm, and target-state assembly.

mod matrices;
mod programs;
mod states;
mod verifiability;
mod witness;

pub use matrices::{
    adv_primal_value, adv_rel_primal_value, curated_functional, curated_relational, difference_norms,
    max_difference_norm, FunctionalAdversaryMatrix, RelationalAdversaryMatrix, NSD_TOL,
};
pub use programs::{
    filtered_residual, gamma2_filtered, optimal_adversary_matrix, relational_gram_dimension, solve_adv, solve_adv_rel, AdvOptions,
    FunctionalSolve, Gamma2Solve, RelationalSolve, SdpSummary, MAX_PROGRAM_ARITY,
};
pub use states::{
    assemble_target_states, measurement_error, state_overlap_defects, TargetStateAssembly,
    ASSEMBLY_RESIDUAL_TOL,
};
pub use verifiability::{
    efficient_verifiability_report, verifiability_with_denominator, SliceRatio, VerifiabilityReport,
};
pub use witness::{
    check_functional_witness, check_relational_witness, check_sigma_support, functional_residual,
    relational_residual, Artifact, BoundCertificate, CertificateKind, FunctionalDualWitness,
    RelationalDualWitness, WitnessJson,
};
