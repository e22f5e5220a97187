use serde::Serialize;

use crate::boolean::{chi_vector, difference_matrix, library, BooleanFunction, Relation};
use crate::error::{AdvError, Result};
use crate::linalg::{lambda_max, spectral_norm, DenseMatrix, SYMMETRY_TOL};

/// Relative tolerance for `Γ ∘ χ_aχ_aᵀ ⪯ 0`: `λ_max ≤ NSD_TOL·(1 + ‖Γ‖)`.
pub const NSD_TOL: f64 = 1e-8;

/// A symmetric `Γ` with `Γ(x, y) = 0` whenever `g(x) = g(y)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalAdversaryMatrix {
    g: BooleanFunction,
    gamma: DenseMatrix,
}

impl FunctionalAdversaryMatrix {
    pub fn new(g: BooleanFunction, gamma: DenseMatrix) -> Result<Self> {
        check_square(&gamma, g.size())?;
        gamma.ensure_symmetric(SYMMETRY_TOL)?;
        for x in 0..g.size() {
            for y in 0..g.size() {
                if g.value(x) == g.value(y) && gamma[(x, y)] != 0.0 {
                    return Err(AdvError::CertificateInvalid(format!(
                        "Γ({x},{y}) = {:e} but g({x}) = g({y})",
                        gamma[(x, y)]
                    )));
                }
            }
        }
        Ok(Self { g, gamma })
    }

    /// Builds `Γ` from its off-diagonal block `Z` under the canonical order
    /// (0-inputs ascending, then 1-inputs ascending).
    pub fn from_z(g: BooleanFunction, z: &DenseMatrix) -> Result<Self> {
        let (zeros, ones) = (g.preimage(false), g.preimage(true));
        if z.shape() != (zeros.len(), ones.len()) {
            return Err(AdvError::Shape(format!(
                "Z is {}x{}, expected {}x{}",
                z.rows(),
                z.cols(),
                zeros.len(),
                ones.len()
            )));
        }
        let mut gamma = DenseMatrix::zeros(g.size(), g.size());
        for (r, &x) in zeros.iter().enumerate() {
            for (c, &y) in ones.iter().enumerate() {
                gamma[(x, y)] = z[(r, c)];
                gamma[(y, x)] = z[(r, c)];
            }
        }
        Self::new(g, gamma)
    }

    pub fn g(&self) -> &BooleanFunction {
        &self.g
    }

    pub fn gamma(&self) -> &DenseMatrix {
        &self.gamma
    }

    /// `Z = Γ[g⁻¹(0), g⁻¹(1)]`. Fails for constant `g`, where the block is
    /// empty.
    pub fn z_block(&self) -> Result<DenseMatrix> {
        let (zeros, ones) = (self.g.preimage(false), self.g.preimage(true));
        if zeros.is_empty() || ones.is_empty() {
            return Err(AdvError::Domain("constant function has an empty Z block".into()));
        }
        Ok(self.gamma.select(&zeros, &ones))
    }

    /// The canonical ordering as a list of inputs.
    pub fn canonical_order(&self) -> Vec<usize> {
        let mut order = self.g.preimage(false);
        order.extend(self.g.preimage(true));
        order
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { g: self.g.clone(), gamma: self.gamma.scale(c) }
    }
}

/// A symmetric `Γ` over the inputs of a relation. Negative semidefiniteness
/// of each `Γ ∘ χ_aχ_aᵀ` is checked when a value is requested.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationalAdversaryMatrix {
    f: Relation,
    gamma: DenseMatrix,
}

impl RelationalAdversaryMatrix {
    pub fn new(f: Relation, gamma: DenseMatrix) -> Result<Self> {
        check_square(&gamma, f.size())?;
        gamma.ensure_symmetric(SYMMETRY_TOL)?;
        Ok(Self { f, gamma })
    }

    /// A functional adversary matrix viewed over `g` as a relation.
    pub fn from_functional(m: &FunctionalAdversaryMatrix) -> Self {
        Self { f: crate::boolean::function_as_relation(m.g()), gamma: m.gamma().clone() }
    }

    pub fn f(&self) -> &Relation {
        &self.f
    }

    pub fn gamma(&self) -> &DenseMatrix {
        &self.gamma
    }

    /// `λ_max(Γ ∘ χ_aχ_aᵀ)` for each `a`.
    pub fn nsd_margins(&self) -> Result<Vec<f64>> {
        (0..self.f.k())
            .map(|a| {
                let chi = chi_vector(&self.f, a)?;
                let support: Vec<usize> = (0..chi.len()).filter(|&x| chi[x] == 1.0).collect();
                if support.is_empty() {
                    return Ok(0.0);
                }
                // Rows outside the support are zero and contribute eigenvalue 0.
                let restricted = lambda_max(&self.gamma.select(&support, &support))?;
                Ok(if support.len() < chi.len() { restricted.max(0.0) } else { restricted })
            })
            .collect()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { f: self.f.clone(), gamma: self.gamma.scale(c) }
    }
}

fn check_square(gamma: &DenseMatrix, size: usize) -> Result<()> {
    if gamma.shape() != (size, size) {
        return Err(AdvError::Shape(format!(
            "Γ is {}x{}, expected {size}x{size}",
            gamma.rows(),
            gamma.cols()
        )));
    }
    Ok(())
}

/// `max_i ‖Γ ∘ D_i‖` over the `n` input bits.
pub fn max_difference_norm(gamma: &DenseMatrix, n: usize) -> Result<f64> {
    difference_norms(gamma, n).map(|v| v.into_iter().fold(0.0, f64::max))
}

/// `‖Γ ∘ D_i‖` for each bit `i`.
pub fn difference_norms(gamma: &DenseMatrix, n: usize) -> Result<Vec<f64>> {
    (0..n).map(|i| spectral_norm(&gamma.hadamard(&difference_matrix(n, i)?)?)).collect()
}

/// `‖Γ‖ / max_i ‖Γ ∘ D_i‖`, or 0 for `Γ = 0`.
pub fn adv_primal_value(m: &FunctionalAdversaryMatrix) -> Result<f64> {
    let norm = spectral_norm(m.gamma())?;
    if norm == 0.0 {
        return Ok(0.0);
    }
    let denom = max_difference_norm(m.gamma(), m.g().arity())?;
    if denom == 0.0 {
        return Err(AdvError::CertificateInvalid(
            "nonzero Γ vanishes on every difference mask".into(),
        ));
    }
    Ok(norm / denom)
}

/// `λ_max(Γ) / max_i ‖Γ ∘ D_i‖`, or 0 when `λ_max(Γ) ≤ 0`. Rejects matrices
/// violating `Γ ∘ χ_aχ_aᵀ ⪯ 0`.
pub fn adv_rel_primal_value(m: &RelationalAdversaryMatrix) -> Result<f64> {
    let scale = 1.0 + spectral_norm(m.gamma())?;
    for (a, margin) in m.nsd_margins()?.into_iter().enumerate() {
        if margin > NSD_TOL * scale {
            return Err(AdvError::CertificateInvalid(format!(
                "Γ ∘ χ_{a}χ_{a}ᵀ is not negative semidefinite: λ_max = {margin:e}"
            )));
        }
    }
    let top = lambda_max(m.gamma())?;
    if top <= 0.0 {
        return Ok(0.0);
    }
    let denom = max_difference_norm(m.gamma(), m.f().arity())?;
    if denom == 0.0 {
        return Err(AdvError::CertificateInvalid(
            "Γ with positive λ_max vanishes on every difference mask".into(),
        ));
    }
    Ok(top / denom)
}

/// Hand-built adversary matrices for named fixtures.
pub fn curated_functional(name: &str) -> Option<FunctionalAdversaryMatrix> {
    let g = library::function_by_name(name)?;
    let star = |center: usize, leaves: &[usize]| {
        DenseMatrix::from_fn(4, 4, |x, y| {
            let hit = (x == center && leaves.contains(&y)) || (y == center && leaves.contains(&x));
            if hit { 1.0 } else { 0.0 }
        })
    };
    let gamma = match name {
        "identity1" | "not1" => DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]),
        "or2" => star(0, &[1, 2]),
        "and2" => star(3, &[1, 2]),
        "parity2" => DenseMatrix::from_fn(4, 4, |x, y| if g.value(x) != g.value(y) { 1.0 } else { 0.0 }),
        _ => return None,
    };
    FunctionalAdversaryMatrix::new(g, gamma).ok()
}

/// Hand-built relational matrices: functional fixtures as relations, and
/// `Γ(01, 10) = 1` for FIND-ONE₂.
pub fn curated_relational(name: &str) -> Option<RelationalAdversaryMatrix> {
    if let Some(inner) = name.strip_suffix("-rel") {
        return curated_functional(inner).map(|m| RelationalAdversaryMatrix::from_functional(&m));
    }
    match name {
        "findone2" => {
            let f = library::find_one(2).ok()?;
            let gamma = DenseMatrix::from_fn(4, 4, |x, y| if (x, y) == (1, 2) || (x, y) == (2, 1) { 1.0 } else { 0.0 });
            RelationalAdversaryMatrix::new(f, gamma).ok()
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::library::*;

    #[test]
    fn primal_values_of_curated_matrices() {
        let cases = [("identity1", 1.0), ("or2", 2f64.sqrt()), ("and2", 2f64.sqrt()), ("parity2", 2.0)];
        for (name, expected) in cases {
            let m = curated_functional(name).unwrap();
            let v = adv_primal_value(&m).unwrap();
            assert!((v - expected).abs() < 1e-12, "{name}: {v}");
        }
    }

    #[test]
    fn zero_pattern_is_enforced() {
        let g = or(2).unwrap();
        let mut gamma = DenseMatrix::zeros(4, 4);
        gamma[(1, 2)] = 1.0;
        gamma[(2, 1)] = 1.0;
        assert!(matches!(
            FunctionalAdversaryMatrix::new(g.clone(), gamma),
            Err(AdvError::CertificateInvalid(_))
        ));
        let zero = FunctionalAdversaryMatrix::new(g, DenseMatrix::zeros(4, 4)).unwrap();
        assert_eq!(adv_primal_value(&zero).unwrap(), 0.0);
    }

    #[test]
    fn z_block_round_trip() {
        let m = curated_functional("parity2").unwrap();
        let z = m.z_block().unwrap();
        assert_eq!(z, DenseMatrix::ones(2, 2));
        let back = FunctionalAdversaryMatrix::from_z(m.g().clone(), &z).unwrap();
        assert_eq!(back, m);
        let order = m.canonical_order();
        assert_eq!(order, vec![0, 3, 1, 2]);
        let permuted = m.gamma().select(&order, &order);
        for r in 0..4 {
            for c in 0..4 {
                let expected = if (r < 2) != (c < 2) { 1.0 } else { 0.0 };
                assert_eq!(permuted[(r, c)], expected);
            }
        }
        let constant = FunctionalAdversaryMatrix::new(constant(1, true).unwrap(), DenseMatrix::zeros(2, 2)).unwrap();
        assert!(constant.z_block().is_err());
    }

    #[test]
    fn scale_invariance() {
        let m = curated_functional("or2").unwrap();
        let base = adv_primal_value(&m).unwrap();
        for c in [0.1, 3.0, 1e4] {
            let v = adv_primal_value(&m.scaled(c)).unwrap();
            assert!((v - base).abs() <= 1e-12 * base);
        }
    }

    #[test]
    fn relational_values() {
        let parity = curated_relational("parity2-rel").unwrap();
        assert!((adv_rel_primal_value(&parity).unwrap() - 2.0).abs() < 1e-12);

        let neg = RelationalAdversaryMatrix::new(find_one(2).unwrap(), DenseMatrix::identity(4).scale(-1.0)).unwrap();
        assert_eq!(adv_rel_primal_value(&neg).unwrap(), 0.0);

        let all = all_pairs(2, 1).unwrap();
        let m = RelationalAdversaryMatrix::new(all, curated_functional("parity2").unwrap().gamma().clone()).unwrap();
        assert!(matches!(adv_rel_primal_value(&m), Err(AdvError::CertificateInvalid(_))));

        let f1 = curated_relational("findone2").unwrap();
        assert!((adv_rel_primal_value(&f1).unwrap() - 1.0).abs() < 1e-12);
    }
}
