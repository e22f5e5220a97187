use serde::Serialize;

use super::programs::{solve_adv, solve_adv_rel, AdvOptions};
use crate::boolean::{relation_slice, Relation};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceRatio {
    pub a: usize,
    pub slice_value: f64,
    /// `None` when the relational value is zero.
    pub ratio: Option<f64>,
}

/// `ADV±(f_a) / ADV_rel±(f)` per output symbol. Finite ratios only; no
/// asymptotic verdict is drawn.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifiabilityReport {
    pub relational_value: f64,
    pub slices: Vec<SliceRatio>,
    pub warnings: Vec<String>,
}

pub fn efficient_verifiability_report(f: &Relation, opts: &AdvOptions) -> Result<VerifiabilityReport> {
    let denom = solve_adv_rel(f, opts)?.value;
    verifiability_with_denominator(f, denom, opts)
}

/// As [`efficient_verifiability_report`] with a precomputed `ADV_rel±(f)`.
pub fn verifiability_with_denominator(f: &Relation, relational_value: f64, opts: &AdvOptions) -> Result<VerifiabilityReport> {
    let zero = relational_value.abs() <= opts.solver.tol.max(1e-9) * 10.0;
    let mut warnings = vec!["ratios at a single input size; efficient verifiability is asymptotic".to_string()];
    if zero {
        warnings.push(format!(
            "relational value {relational_value:.3e} is zero; ratios reported as infinite"
        ));
    }
    let slices = (0..f.k())
        .map(|a| {
            let slice_value = solve_adv(&relation_slice(f, a)?, opts)?.value;
            let ratio = if zero { None } else { Some(slice_value / relational_value) };
            Ok(SliceRatio { a, slice_value, ratio })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifiabilityReport { relational_value, slices, warnings })
}
