//! Gram-matrix formulations of the dual adversary programs.
//!
//! One PSD block holds the Gram matrix of all `u_{x,i}`, `v_{x,i}` and (for
//! relations) `σ_{x,a}` with `(x, a) ∈ f`; a scalar block holds the objective
//! `t`; one scalar slack per row-sum constraint
//! `t − Σ_i ‖u_{x,i}‖² − s = 0` (and likewise for `v`).

use std::collections::BTreeMap;

use serde::Serialize;

use super::matrices::{
    adv_rel_primal_value, max_difference_norm, FunctionalAdversaryMatrix, RelationalAdversaryMatrix,
};
use super::witness::{
    check_sigma_support, functional_residual, relational_residual, Artifact, BoundCertificate,
    CertificateKind, FunctionalDualWitness, RelationalDualWitness,
};
use crate::boolean::{BooleanFunction, Relation};
use crate::error::{AdvError, Result};
use crate::linalg::{dot, spectral_norm, DenseMatrix};
use crate::sdp::{gram_to_vectors_with_cutoff, solve, Entry, SdpProblem, SdpSolution, Sense, SolveStatus, SolverOptions};

/// Largest input arity the programs are built for.
pub const MAX_PROGRAM_ARITY: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdvOptions {
    pub solver: SolverOptions,
    /// Tolerance on extracted-witness residuals.
    pub witness_tol: f64,
    /// Gram eigenvalues below `rank_cutoff·‖G‖` are dropped on extraction.
    pub rank_cutoff: f64,
}

impl Default for AdvOptions {
    fn default() -> Self {
        Self { solver: SolverOptions::default(), witness_tol: 1e-6, rank_cutoff: 1e-9 }
    }
}

impl AdvOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { solver: SolverOptions::with_tol(tol), ..Self::default() }
    }
}

/// Solver statistics carried into reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SdpSummary {
    pub status: SolveStatus,
    pub iterations: usize,
    pub primal_value: f64,
    pub dual_value: f64,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub dimension: usize,
    pub constraints: usize,
}

impl SdpSummary {
    fn trivial() -> Self {
        Self {
            status: SolveStatus::Optimal,
            iterations: 0,
            primal_value: 0.0,
            dual_value: 0.0,
            gap: 0.0,
            primal_residual: 0.0,
            dual_residual: 0.0,
            dimension: 0,
            constraints: 0,
        }
    }

    fn of(sol: &SdpSolution, p: &SdpProblem) -> Self {
        Self {
            status: sol.status,
            iterations: sol.iterations,
            primal_value: sol.primal_value,
            dual_value: sol.dual_value,
            gap: sol.gap,
            primal_residual: sol.primal_residual,
            dual_residual: sol.dual_residual,
            dimension: p.total_dim(),
            constraints: p.constraints().len(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FunctionalSolve {
    pub value: f64,
    pub certificate: BoundCertificate,
    pub witness: FunctionalDualWitness,
    pub sdp: SdpSummary,
}

#[derive(Debug, Clone)]
pub struct RelationalSolve {
    pub value: f64,
    pub certificate: BoundCertificate,
    pub witness: RelationalDualWitness,
    /// Primal matrix recovered from the dual multipliers, normalized so that
    /// `max_i ‖Γ ∘ D_i‖ = 1` (or zero).
    pub gamma: RelationalAdversaryMatrix,
    pub primal_value: f64,
    pub sdp: SdpSummary,
}

#[derive(Debug, Clone)]
pub struct Gamma2Solve {
    pub value: f64,
    pub certificate: BoundCertificate,
    pub witness: FunctionalDualWitness,
    pub sdp: SdpSummary,
}

enum PairTarget<'a> {
    /// `[g(x) ≠ g(y)]`, optionally only on disagreeing pairs.
    Function { g: &'a BooleanFunction, agreement: bool },
    /// `1 − Σ_a ⟨σ_{x,a}, σ_{y,a}⟩`.
    Relation(&'a Relation),
    /// `A(x, y)` on `x ≠ y`.
    Matrix(&'a DenseMatrix),
}

struct GramProgram {
    problem: SdpProblem,
    n: usize,
    size: usize,
    k: usize,
    /// Gram index of each present σ, grouped by `a` as `(x, index)`.
    sigma_by_a: Vec<Vec<(usize, usize)>>,
    /// `(x, y, constraint index)`
    pairs: Vec<(usize, usize, usize)>,
    row_u: Vec<usize>,
    row_v: Vec<usize>,
}

impl GramProgram {
    fn u(&self, x: usize, i: usize) -> usize {
        x * self.n + i
    }

    fn v(&self, x: usize, i: usize) -> usize {
        (self.size + x) * self.n + i
    }

    fn uv_dim(&self) -> usize {
        2 * self.size * self.n
    }

    fn build(n: usize, target: PairTarget<'_>) -> Result<Self> {
        if n == 0 || n > MAX_PROGRAM_ARITY {
            return Err(AdvError::Size(format!("arity {n} outside [1, {MAX_PROGRAM_ARITY}]")));
        }
        let size = 1usize << n;
        let k = match &target {
            PairTarget::Relation(f) => f.k(),
            _ => 0,
        };
        let mut next = 2 * size * n;
        let mut sigma_index = vec![None; size * k];
        let mut sigma_by_a = vec![Vec::new(); k];
        if let PairTarget::Relation(f) = &target {
            for a in 0..k {
                for x in 0..size {
                    if f.contains(x, a) {
                        sigma_index[x * k + a] = Some(next);
                        sigma_by_a[a].push((x, next));
                        next += 1;
                    }
                }
            }
        }
        let dim = next;
        let mut blocks = vec![dim, 1];
        blocks.extend(std::iter::repeat_n(1, 2 * size));
        let mut problem = SdpProblem::new(blocks, Sense::Minimize)?;
        problem.set_objective(vec![Entry::new(1, 0, 0, 1.0)])?;

        let mut prog = Self {
            problem,
            n,
            size,
            k,
            sigma_by_a,
            pairs: Vec::new(),
            row_u: Vec::new(),
            row_v: Vec::new(),
        };
        for x in 0..size {
            for y in 0..size {
                let mut entries: Vec<Entry> = (0..n)
                    .filter(|i| ((x ^ y) >> i) & 1 == 1)
                    .map(|i| Entry::new(0, prog.u(x, i), prog.v(y, i), 1.0))
                    .collect();
                let rhs = match &target {
                    PairTarget::Function { g, agreement } => {
                        let differ = g.value(x) != g.value(y);
                        if !differ && !agreement {
                            continue;
                        }
                        if differ { 1.0 } else { 0.0 }
                    }
                    PairTarget::Relation(_) => {
                        for a in 0..k {
                            if let (Some(sx), Some(sy)) = (sigma_index[x * k + a], sigma_index[y * k + a]) {
                                entries.push(Entry::new(0, sx, sy, 1.0));
                            }
                        }
                        1.0
                    }
                    PairTarget::Matrix(a) => a[(x, y)],
                };
                if entries.is_empty() {
                    if rhs != 0.0 {
                        return Err(AdvError::Infeasible(format!(
                            "constraint ({x},{y}) has no variables but right-hand side {rhs}"
                        )));
                    }
                    continue;
                }
                let c = prog.problem.add_constraint(entries, rhs)?;
                prog.pairs.push((x, y, c));
            }
        }
        for x in 0..size {
            for (family, slack) in [(0usize, 2 + x), (1, 2 + size + x)] {
                let mut entries = vec![Entry::new(1, 0, 0, 1.0), Entry::new(slack, 0, 0, -1.0)];
                for i in 0..n {
                    let idx = if family == 0 { prog.u(x, i) } else { prog.v(x, i) };
                    entries.push(Entry::new(0, idx, idx, -1.0));
                }
                let c = prog.problem.add_constraint(entries, 0.0)?;
                if family == 0 {
                    prog.row_u.push(c);
                } else {
                    prog.row_v.push(c);
                }
            }
        }
        Ok(prog)
    }

    fn solve(&self, opts: &AdvOptions) -> Result<SdpSolution> {
        let sol = solve(&self.problem, &opts.solver)?;
        if !sol.is_optimal() {
            return Err(AdvError::Numeric(format!(
                "SDP ended with status {:?} after {} iterations (gap {:.3e}, primal residual {:.3e}, dual residual {:.3e})",
                sol.status, sol.iterations, sol.gap, sol.primal_residual, sol.dual_residual
            )));
        }
        Ok(sol)
    }

    fn extract_uv(&self, sol: &SdpSolution, opts: &AdvOptions) -> Result<(usize, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        let g = &sol.primal[0];
        let idx: Vec<usize> = (0..self.uv_dim()).collect();
        let sub = g.select(&idx, &idx);
        let vecs = factor(&sub, opts)?;
        let dim = vecs.first().map_or(0, Vec::len);
        let (u, v) = vecs.split_at(self.size * self.n);
        if dim == 0 {
            // All vectors vanish: represent them in dimension 1.
            let count = self.size * self.n;
            return Ok((1, vec![vec![0.0]; count], vec![vec![0.0]; count]));
        }
        Ok((dim, u.to_vec(), v.to_vec()))
    }

    fn extract_sigma(&self, sol: &SdpSolution, opts: &AdvOptions) -> Result<(Vec<usize>, Vec<Vec<f64>>)> {
        let g = &sol.primal[0];
        let mut dims = vec![0; self.k];
        let mut sigma = vec![Vec::new(); self.size * self.k];
        for a in 0..self.k {
            let idx: Vec<usize> = self.sigma_by_a[a].iter().map(|&(_, i)| i).collect();
            if !idx.is_empty() {
                let vecs = factor(&g.select(&idx, &idx), opts)?;
                dims[a] = vecs[0].len();
                for (&(x, _), w) in self.sigma_by_a[a].iter().zip(vecs) {
                    sigma[x * self.k + a] = w;
                }
            }
            for x in 0..self.size {
                if sigma[x * self.k + a].is_empty() {
                    sigma[x * self.k + a] = vec![0.0; dims[a]];
                }
            }
        }
        Ok((dims, sigma))
    }

    /// Symmetric primal matrix `Γ = ½ ρ^{-½} W ρ^{-½}` from the multipliers
    /// `W` of the pair constraints and `ρ = (α + β)/2` of the row sums. Rows
    /// with negligible `ρ` are dropped.
    fn gamma_from_multipliers(&self, sol: &SdpSolution) -> DenseMatrix {
        let y = &sol.dual;
        let mut w = DenseMatrix::zeros(self.size, self.size);
        for &(x, z, c) in &self.pairs {
            w[(x, z)] += 0.5 * y[c];
            w[(z, x)] += 0.5 * y[c];
        }
        let rho: Vec<f64> = (0..self.size).map(|x| 0.5 * (y[self.row_u[x]] + y[self.row_v[x]])).collect();
        let top = rho.iter().copied().fold(0.0, f64::max);
        let keep: Vec<bool> = rho.iter().map(|&r| r > RHO_CUTOFF * top).collect();
        DenseMatrix::from_fn(self.size, self.size, |x, z| {
            if keep[x] && keep[z] {
                0.5 * w[(x, z)] / (rho[x] * rho[z]).sqrt()
            } else {
                0.0
            }
        })
    }
}

const RHO_CUTOFF: f64 = 1e-8;

fn factor(g: &DenseMatrix, opts: &AdvOptions) -> Result<Vec<Vec<f64>>> {
    let norm = spectral_norm(g)?;
    gram_to_vectors_with_cutoff(g, opts.witness_tol, opts.rank_cutoff * norm)
}

fn base_residuals(sol: &SdpSolution) -> BTreeMap<String, f64> {
    BTreeMap::from([
        ("duality_gap".to_string(), sol.gap),
        ("sdp_primal_residual".to_string(), sol.primal_residual),
        ("sdp_dual_residual".to_string(), sol.dual_residual),
    ])
}

/// Order of the Gram block in the relational program for `f`: one row per
/// `u_{x,i}`, `v_{x,i}` and present `σ_{x,a}`.
pub fn relational_gram_dimension(f: &Relation) -> usize {
    let present = (0..f.size()).map(|x| (0..f.k()).filter(|&a| f.contains(x, a)).count()).sum::<usize>();
    2 * f.size() * f.arity() + present
}

/// ADV±(g) through the Gram program with one constraint per ordered pair,
/// agreement pairs included.
pub fn solve_adv(g: &BooleanFunction, opts: &AdvOptions) -> Result<FunctionalSolve> {
    if g.arity() > MAX_PROGRAM_ARITY {
        return Err(AdvError::Size(format!("arity {} exceeds {MAX_PROGRAM_ARITY}", g.arity())));
    }
    if g.is_constant() {
        let witness = FunctionalDualWitness::zero(g.arity());
        let residuals = BTreeMap::from([("witness_constraint".to_string(), 0.0)]);
        let certificate = BoundCertificate::new(0.0, CertificateKind::SdpSolve, residuals, opts.witness_tol)
            .with_artifact(Artifact::Witness(witness.to_json()));
        return Ok(FunctionalSolve { value: 0.0, certificate, witness, sdp: SdpSummary::trivial() });
    }
    let prog = GramProgram::build(g.arity(), PairTarget::Function { g, agreement: true })?;
    let sol = prog.solve(opts)?;
    let (dim, u, v) = prog.extract_uv(&sol, opts)?;
    let witness = FunctionalDualWitness::new(g.arity(), dim, u, v)?;
    let value = sol.primal_value;
    let mut residuals = base_residuals(&sol);
    residuals.insert("witness_constraint".into(), functional_residual(g, &witness)?);
    residuals.insert("witness_value_excess".into(), (witness.value() - value).max(0.0));
    let certificate = BoundCertificate::new(value, CertificateKind::SdpSolve, residuals, opts.witness_tol)
        .with_artifact(Artifact::Witness(witness.to_json()));
    Ok(FunctionalSolve { value, certificate, witness, sdp: SdpSummary::of(&sol, &prog.problem) })
}

/// An optimal functional adversary matrix, recovered from the multipliers of
/// the program without agreement constraints (so the zero pattern is exact).
/// Normalized to `max_i ‖Γ ∘ D_i‖ = 1`; returns the matrix and the SDP value.
pub fn optimal_adversary_matrix(g: &BooleanFunction, opts: &AdvOptions) -> Result<(FunctionalAdversaryMatrix, f64)> {
    if g.arity() > MAX_PROGRAM_ARITY {
        return Err(AdvError::Size(format!("arity {} exceeds {MAX_PROGRAM_ARITY}", g.arity())));
    }
    if g.is_constant() {
        return Ok((FunctionalAdversaryMatrix::new(g.clone(), DenseMatrix::zeros(g.size(), g.size()))?, 0.0));
    }
    let prog = GramProgram::build(g.arity(), PairTarget::Function { g, agreement: false })?;
    let sol = prog.solve(opts)?;
    let mut gamma = prog.gamma_from_multipliers(&sol);
    for x in 0..g.size() {
        for y in 0..g.size() {
            if g.value(x) == g.value(y) {
                gamma[(x, y)] = 0.0;
            }
        }
    }
    let denom = max_difference_norm(&gamma, g.arity())?;
    if denom > 0.0 {
        gamma = gamma.scale(1.0 / denom);
    }
    Ok((FunctionalAdversaryMatrix::new(g.clone(), gamma.symmetrized())?, sol.primal_value))
}

/// ADV_rel±(f) through the extended Gram program, with the witness, the x = y
/// normalization residual, and a primal matrix from the multipliers.
pub fn solve_adv_rel(f: &Relation, opts: &AdvOptions) -> Result<RelationalSolve> {
    f.ensure_total()?;
    let prog = GramProgram::build(f.arity(), PairTarget::Relation(f))?;
    let sol = prog.solve(opts)?;
    let (dim, u, v) = prog.extract_uv(&sol, opts)?;
    let (dims, sigma) = prog.extract_sigma(&sol, opts)?;
    let witness = RelationalDualWitness::new(f.arity(), f.k(), dim, u, v, dims, sigma)?;
    check_sigma_support(f, &witness)?;

    let gamma = repair_relational(f, prog.gamma_from_multipliers(&sol))?;
    let primal_value = adv_rel_primal_value(&gamma)?;

    let value = sol.primal_value;
    let mut residuals = base_residuals(&sol);
    residuals.insert("witness_constraint".into(), relational_residual(f, &witness)?);
    residuals.insert("witness_normalization".into(), witness.normalization_residual());
    residuals.insert("witness_value_excess".into(), (witness.value() - value).max(0.0));
    residuals.insert("primal_value_excess".into(), (primal_value - value).max(0.0));
    let certificate = BoundCertificate::new(value, CertificateKind::SdpSolve, residuals, opts.witness_tol)
        .with_artifact(Artifact::Witness(witness.to_json()));
    Ok(RelationalSolve { value, certificate, witness, gamma, primal_value, sdp: SdpSummary::of(&sol, &prog.problem) })
}

/// Shifts `Γ` by `−c·I` to remove any positive `λ_max(Γ ∘ χ_aχ_aᵀ)` left by
/// solver noise (the masks `D_i` have zero diagonal, so their norms are
/// unchanged), then normalizes to `max_i ‖Γ ∘ D_i‖ = 1`.
fn repair_relational(f: &Relation, gamma: DenseMatrix) -> Result<RelationalAdversaryMatrix> {
    let gamma = gamma.symmetrized();
    let m = RelationalAdversaryMatrix::new(f.clone(), gamma.clone())?;
    let shift = m.nsd_margins()?.into_iter().fold(0.0, f64::max);
    let mut gamma = gamma;
    for x in 0..f.size() {
        gamma[(x, x)] -= shift;
    }
    let denom = max_difference_norm(&gamma, f.arity())?;
    if denom > 0.0 {
        gamma = gamma.scale(1.0 / denom);
    }
    RelationalAdversaryMatrix::new(f.clone(), gamma)
}

/// `max_{x,y} |Σ_i ⟨u_{x,i}, v_{y,i}⟩ D_i(x,y) − A(x,y)|`.
pub fn filtered_residual(a: &DenseMatrix, w: &FunctionalDualWitness) -> Result<f64> {
    let size = 1usize << w.arity();
    if a.shape() != (size, size) {
        return Err(AdvError::Structural(format!(
            "matrix is {}x{}, witness covers {size} inputs",
            a.rows(),
            a.cols()
        )));
    }
    let mut worst: f64 = 0.0;
    for x in 0..size {
        for y in 0..size {
            let lhs: f64 = (0..w.arity())
                .filter(|i| ((x ^ y) >> i) & 1 == 1)
                .map(|i| dot(w.u(x, i), w.v(y, i)))
                .sum();
            worst = worst.max((lhs - a[(x, y)]).abs());
        }
    }
    Ok(worst)
}

/// The filtered γ₂ norm `γ₂(A | D)` for a `2ⁿ × 2ⁿ` matrix `A` with zero
/// diagonal.
pub fn gamma2_filtered(a: &DenseMatrix, opts: &AdvOptions) -> Result<Gamma2Solve> {
    let size = a.rows();
    if !a.is_square() || !size.is_power_of_two() || size < 2 {
        return Err(AdvError::Shape(format!("matrix is {}x{}, expected 2^n square", a.rows(), a.cols())));
    }
    let n = size.trailing_zeros() as usize;
    if n > MAX_PROGRAM_ARITY {
        return Err(AdvError::Size(format!("arity {n} exceeds {MAX_PROGRAM_ARITY}")));
    }
    if let Some(x) = (0..size).find(|&x| a[(x, x)] != 0.0) {
        return Err(AdvError::Infeasible(format!(
            "A({x},{x}) = {} but every difference mask vanishes on the diagonal",
            a[(x, x)]
        )));
    }
    if a.max_abs() == 0.0 {
        let witness = FunctionalDualWitness::zero(n);
        let residuals = BTreeMap::from([("witness_constraint".to_string(), 0.0)]);
        let certificate = BoundCertificate::new(0.0, CertificateKind::SdpSolve, residuals, opts.witness_tol)
            .with_artifact(Artifact::Witness(witness.to_json()));
        return Ok(Gamma2Solve { value: 0.0, certificate, witness, sdp: SdpSummary::trivial() });
    }
    let prog = GramProgram::build(n, PairTarget::Matrix(a))?;
    let sol = prog.solve(opts)?;
    let (dim, u, v) = prog.extract_uv(&sol, opts)?;
    let witness = FunctionalDualWitness::new(n, dim, u, v)?;
    let value = sol.primal_value;
    let mut residuals = base_residuals(&sol);
    residuals.insert("witness_constraint".into(), filtered_residual(a, &witness)?);
    residuals.insert("witness_value_excess".into(), (witness.value() - value).max(0.0));
    let certificate = BoundCertificate::new(value, CertificateKind::SdpSolve, residuals, opts.witness_tol)
        .with_artifact(Artifact::Witness(witness.to_json()));
    Ok(Gamma2Solve { value, certificate, witness, sdp: SdpSummary::of(&sol, &prog.problem) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::matrices::{adv_primal_value, curated_functional};
    use crate::boolean::library::*;
    use crate::boolean::function_as_relation;

    fn opts() -> AdvOptions {
        AdvOptions::default()
    }

    #[test]
    fn identity_value() {
        let s = solve_adv(&identity1(), &opts()).unwrap();
        assert!((s.value - 1.0).abs() < 1e-5, "{}", s.value);
        assert!(s.certificate.valid, "{:?}", s.certificate.residuals);
    }

    #[test]
    fn or_and_parity_values_sandwich_curated_certificates() {
        for (name, expected) in [("or2", 2f64.sqrt()), ("and2", 2f64.sqrt()), ("parity2", 2.0)] {
            let g = function_by_name(name).unwrap();
            let s = solve_adv(&g, &opts()).unwrap();
            assert!((s.value - expected).abs() < 1e-4, "{name}: {}", s.value);
            assert!(s.certificate.valid, "{name}: {:?}", s.certificate.residuals);
            let primal = adv_primal_value(&curated_functional(name).unwrap()).unwrap();
            assert!(primal <= s.value + 1e-4);
        }
    }

    #[test]
    fn constant_function_is_zero() {
        let s = solve_adv(&constant(2, true).unwrap(), &opts()).unwrap();
        assert_eq!(s.value, 0.0);
        assert!(s.certificate.valid);
    }

    #[test]
    fn recovered_functional_matrix_is_optimal() {
        for name in ["identity1", "or2", "and2", "parity2", "maj3"] {
            let g = function_by_name(name).unwrap();
            let (m, v) = optimal_adversary_matrix(&g, &opts()).unwrap();
            let p = adv_primal_value(&m).unwrap();
            assert!((p - v).abs() < 1e-4 * (1.0 + v), "{name}: primal {p} vs sdp {v}");
        }
    }

    #[test]
    fn all_pairs_relation_is_zero() {
        for n in 1..=2 {
            let s = solve_adv_rel(&all_pairs(n, 1).unwrap(), &opts()).unwrap();
            assert!(s.value.abs() < 1e-5, "{}", s.value);
            assert!(s.certificate.valid, "{:?}", s.certificate.residuals);
        }
    }

    #[test]
    fn parity_as_relation_matches_functional() {
        let g = parity(2).unwrap();
        let s = solve_adv_rel(&function_as_relation(&g), &opts()).unwrap();
        assert!((s.value - 2.0).abs() < 1e-3, "{}", s.value);
        assert!(s.certificate.valid, "{:?}", s.certificate.residuals);
        assert!((s.primal_value - s.value).abs() < 1e-3);
    }

    #[test]
    fn gamma2_examples() {
        let zero = gamma2_filtered(&DenseMatrix::zeros(4, 4), &opts()).unwrap();
        assert_eq!(zero.value, 0.0);
        let mut diag = DenseMatrix::zeros(4, 4);
        diag[(1, 1)] = 1.0;
        assert!(matches!(gamma2_filtered(&diag, &opts()), Err(AdvError::Infeasible(_))));

        let g = or(2).unwrap();
        let a = DenseMatrix::from_fn(4, 4, |x, y| if g.value(x) != g.value(y) { 1.0 } else { 0.0 });
        let s = gamma2_filtered(&a, &opts()).unwrap();
        assert!((s.value - 2f64.sqrt()).abs() < 1e-4, "{}", s.value);
        assert!(s.certificate.valid);
    }

    #[test]
    fn size_caps() {
        assert!(matches!(solve_adv(&parity(5).unwrap(), &opts()), Err(AdvError::Size(_))));
    }

    #[test]
    fn gram_dimension_matches_the_built_program() {
        for f in [find_one(2).unwrap(), all_pairs(2, 2).unwrap(), function_as_relation(&or(2).unwrap())] {
            let s = solve_adv_rel(&f, &opts()).unwrap();
            // Gram block, the t block, and one scalar slack per row sum
            assert_eq!(s.sdp.dimension, relational_gram_dimension(&f) + 1 + 2 * f.size());
        }
    }
}
