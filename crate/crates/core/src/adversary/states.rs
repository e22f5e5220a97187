use serde::Serialize;

use super::witness::{relational_residual, RelationalDualWitness};
use crate::boolean::Relation;
use crate::error::{AdvError, Result};
use crate::linalg::{dot, norm_sq};

/// Largest witness residual accepted when assembling target states.
pub const ASSEMBLY_RESIDUAL_TOL: f64 = 1e-6;

/// States `ψ_x = σ_{x,0} ⊕ … ⊕ σ_{x,K-1} ∈ ℝ^M` and the coordinate ranges
/// `(s_a, m_a)` of the projectors `Π_a`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetStateAssembly {
    pub states: Vec<Vec<f64>>,
    pub ranges: Vec<(usize, usize)>,
}

impl TargetStateAssembly {
    pub fn dimension(&self) -> usize {
        self.ranges.iter().map(|&(_, m)| m).sum()
    }

    /// `Π_a v` restricted to the coordinates of `a`.
    pub fn project<'a>(&self, v: &'a [f64], a: usize) -> &'a [f64] {
        let (s, m) = self.ranges[a];
        &v[s..s + m]
    }

    /// `max_x |‖ψ_x‖² − 1|`.
    pub fn normalization_error(&self) -> f64 {
        self.states.iter().map(|s| (norm_sq(s) - 1.0).abs()).fold(0.0, f64::max)
    }
}

pub fn assemble_target_states(f: &Relation, w: &RelationalDualWitness) -> Result<TargetStateAssembly> {
    let residual = relational_residual(f, w)?;
    if residual > ASSEMBLY_RESIDUAL_TOL {
        return Err(AdvError::CertificateInvalid(format!(
            "witness residual {residual:e} exceeds {ASSEMBLY_RESIDUAL_TOL:e}"
        )));
    }
    let mut ranges = Vec::with_capacity(f.k());
    let mut start = 0;
    for &m in w.sigma_dims() {
        ranges.push((start, m));
        start += m;
    }
    let states = (0..f.size())
        .map(|x| (0..f.k()).flat_map(|a| w.sigma(x, a).iter().copied()).collect())
        .collect();
    Ok(TargetStateAssembly { states, ranges })
}

/// `1 − ⟨ψ_x, ψ_y⟩` for all pairs.
pub fn state_overlap_defects(assembly: &TargetStateAssembly) -> Vec<Vec<f64>> {
    let s = &assembly.states;
    s.iter().map(|a| s.iter().map(|b| 1.0 - dot(a, b)).collect()).collect()
}

/// `Σ_{a: (x,a) ∉ f} ‖Π_a ψ'_x‖²` for each `x`: the probability that
/// measuring `ψ'_x` with the projectors returns an invalid answer.
pub fn measurement_error(assembly: &TargetStateAssembly, approx: &[Vec<f64>], f: &Relation) -> Result<Vec<f64>> {
    if approx.len() != assembly.states.len() || f.size() != approx.len() || f.k() != assembly.ranges.len() {
        return Err(AdvError::Shape(format!(
            "{} approximate states for {} inputs",
            approx.len(),
            assembly.states.len()
        )));
    }
    let dim = assembly.dimension();
    approx
        .iter()
        .enumerate()
        .map(|(x, v)| {
            if v.len() != dim {
                return Err(AdvError::Shape(format!("state {x} has length {}, expected {dim}", v.len())));
            }
            Ok((0..f.k()).filter(|&a| !f.contains(x, a)).map(|a| norm_sq(assembly.project(v, a))).sum())
        })
        .collect()
}
