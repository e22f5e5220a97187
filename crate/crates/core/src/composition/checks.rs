use serde::Serialize;

use super::lower::{verify_composed_lower, LowerTolerances};
use super::report::{Check, CompositionKind, CompositionReport};
use super::upper::compose_dual_witnesses;
use crate::adversary::{
    check_relational_witness, optimal_adversary_matrix, relational_gram_dimension, solve_adv, solve_adv_rel,
    verifiability_with_denominator, AdvOptions, BoundCertificate, MAX_PROGRAM_ARITY,
};
use crate::boolean::{compose_function, compose_relation, BooleanFunction, Relation};
use crate::error::{AdvError, Result};

/// Whether the composed relation is also solved directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectMode {
    /// Solve when the composed Gram dimension is at most
    /// [`CompositionOptions::direct_auto_max_dim`].
    Auto,
    Force,
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompositionOptions {
    pub adv: AdvOptions,
    pub direct: DirectMode,
    pub direct_auto_max_dim: usize,
    pub lower: LowerTolerances,
    /// Residual bound for the composed witness.
    pub witness_tol: f64,
    /// Slack allowed in `lower ≤ direct ≤ upper`.
    pub order_slack: f64,
    /// Relative agreement required between the routes.
    pub equality_rel: f64,
    /// Relative agreement for the functional product check.
    pub product_rel: f64,
    pub verifiability: bool,
}

impl Default for CompositionOptions {
    fn default() -> Self {
        Self {
            adv: AdvOptions::default(),
            direct: DirectMode::Auto,
            direct_auto_max_dim: 200,
            lower: LowerTolerances::default(),
            witness_tol: 1e-5,
            order_slack: 1e-3,
            equality_rel: 1e-2,
            product_rel: 1e-3,
            verifiability: true,
        }
    }
}

fn certificate_check(name: &str, cert: &BoundCertificate) -> Check {
    Check::at_most(name, cert.max_residual(), cert.tolerance)
}

/// `ADV±(f ∘ gᴺ)` against `ADV±(f)·ADV±(g)` through three solves.
pub fn functional_composition_check(
    f: &BooleanFunction,
    g: &BooleanFunction,
    opts: &CompositionOptions,
) -> Result<CompositionReport> {
    let bits = f.arity() * g.arity();
    if bits > MAX_PROGRAM_ARITY {
        return Err(AdvError::Size(format!("composed arity {bits} exceeds {MAX_PROGRAM_ARITY}")));
    }
    let h = compose_function(f, g)?;
    let (outer, (inner, direct)) =
        rayon::join(|| solve_adv(f, &opts.adv), || rayon::join(|| solve_adv(g, &opts.adv), || solve_adv(&h, &opts.adv)));
    let (outer, inner, direct) = (outer?, inner?, direct?);
    let product = outer.value * inner.value;
    let checks = vec![
        certificate_check("outer_certificate", &outer.certificate),
        certificate_check("inner_certificate", &inner.certificate),
        certificate_check("composed_certificate", &direct.certificate),
        Check::at_most(
            "product_equality",
            (direct.value - product).abs(),
            opts.product_rel * product.max(1.0),
        ),
    ];
    Ok(CompositionReport {
        kind: CompositionKind::Functional,
        outer_value: outer.value,
        inner_value: inner.value,
        product_value: product,
        lower_value: None,
        upper_value: None,
        direct_value: Some(direct.value),
        lower: None,
        verifiability: None,
        checks,
        warnings: Vec::new(),
        pass: false,
    }
    .finish())
}

/// The three routes to `ADV_rel±(f ∘ gᴺ)`: the composed primal matrix (lower
/// bound), the composed dual witness (upper bound), and optionally a direct
/// solve of the composed relation.
pub fn relational_composition_check(
    f: &Relation,
    g: &BooleanFunction,
    opts: &CompositionOptions,
) -> Result<CompositionReport> {
    f.ensure_total()?;
    let h = compose_relation(f, g)?;
    let mut warnings = Vec::new();
    let run_direct = match opts.direct {
        DirectMode::Skip => false,
        DirectMode::Force => true,
        DirectMode::Auto => {
            let ok = h.arity() <= MAX_PROGRAM_ARITY && relational_gram_dimension(&h) <= opts.direct_auto_max_dim;
            if !ok {
                warnings.push(format!(
                    "direct solve skipped: composed arity {} exceeds the automatic threshold",
                    h.arity()
                ));
            }
            ok
        }
    };

    let bounds = || -> Result<_> {
        let rel_f = solve_adv_rel(f, &opts.adv)?;
        let fun_g = solve_adv(g, &opts.adv)?;
        let lower = if g.is_constant() {
            None
        } else {
            let (gamma_g, _) = optimal_adversary_matrix(g, &opts.adv)?;
            Some(verify_composed_lower(&rel_f.gamma, &gamma_g, &opts.lower)?)
        };
        let w_h = compose_dual_witnesses(f, &rel_f.witness, g, &fun_g.witness)?;
        let upper_cert = check_relational_witness(&h, &w_h, opts.witness_tol)?;
        let excess = w_h.value() - rel_f.witness.value() * fun_g.witness.value();
        Ok((rel_f, fun_g, lower, upper_cert, excess))
    };
    let direct = || -> Result<Option<_>> {
        if run_direct {
            solve_adv_rel(&h, &opts.adv).map(Some)
        } else {
            Ok(None)
        }
    };
    let (bounds, direct) = rayon::join(bounds, direct);
    let (rel_f, fun_g, lower, upper_cert, excess) = bounds?;
    let direct = direct?;

    let mut checks = vec![
        certificate_check("outer_certificate", &rel_f.certificate),
        certificate_check("inner_certificate", &fun_g.certificate),
    ];
    let lower_value = match &lower {
        Some(report) => {
            checks.extend(report.checks.iter().cloned());
            report.lower_value
        }
        None => {
            warnings.push("inner function is constant; lower bound is the trivial 0".into());
            0.0
        }
    };
    let upper_value = upper_cert.value;
    for (name, &r) in &upper_cert.residuals {
        checks.push(Check::at_most(&format!("upper_witness_{name}"), r, opts.witness_tol));
    }
    checks.push(Check::at_most("upper_value_excess", excess, 1e-9 * (1.0 + upper_value.abs())));

    let scale = upper_value.abs().max(1.0);
    checks.push(Check::at_most("lower_le_upper", lower_value - upper_value, opts.order_slack));
    checks.push(Check::at_most("upper_lower_gap", (upper_value - lower_value).abs(), opts.equality_rel * scale));
    let direct_value = direct.as_ref().map(|d| d.value);
    if let Some(d) = &direct {
        checks.push(certificate_check("direct_certificate", &d.certificate));
        checks.push(Check::at_most("lower_le_direct", lower_value - d.value, opts.order_slack));
        checks.push(Check::at_most("direct_le_upper", d.value - upper_value, opts.order_slack));
        checks.push(Check::at_most("direct_upper_gap", (d.value - upper_value).abs(), opts.equality_rel * scale));
    }

    let verifiability = if !opts.verifiability {
        None
    } else if h.arity() > MAX_PROGRAM_ARITY {
        warnings.push(format!("verifiability report skipped: composed arity {} is above the solver cap", h.arity()));
        None
    } else {
        Some(verifiability_with_denominator(&h, direct_value.unwrap_or(upper_value), &opts.adv)?)
    };

    Ok(CompositionReport {
        kind: CompositionKind::Relational,
        outer_value: rel_f.value,
        inner_value: fun_g.value,
        product_value: rel_f.value * fun_g.value,
        lower_value: Some(lower_value),
        upper_value: Some(upper_value),
        direct_value,
        lower,
        verifiability,
        checks,
        warnings,
        pass: false,
    }
    .finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::function_as_relation;
    use crate::boolean::library::*;

    #[test]
    fn functional_identity_and_parity() {
        let opts = CompositionOptions::default();
        let r = functional_composition_check(&identity1(), &identity1(), &opts).unwrap();
        assert!(r.pass, "{:?}", r.checks);
        assert!((r.direct_value.unwrap() - 1.0).abs() < 1e-6);
        let p = parity(2).unwrap();
        let r = functional_composition_check(&p, &p, &opts).unwrap();
        assert!(r.pass, "{:?}", r.checks);
        assert!((r.direct_value.unwrap() - 4.0).abs() < 4e-3);
    }

    #[test]
    fn functional_arity_cap() {
        let g = maj3();
        let err = functional_composition_check(&parity(2).unwrap(), &g, &CompositionOptions::default()).unwrap_err();
        assert!(matches!(err, AdvError::Size(_)));
    }

    #[test]
    fn relational_identity_inner() {
        let f = find_one(2).unwrap();
        let r = relational_composition_check(&f, &identity1(), &CompositionOptions::default()).unwrap();
        assert!(r.pass, "{:?}", r.failed_checks().collect::<Vec<_>>());
        for v in [r.lower_value, r.upper_value, r.direct_value] {
            assert!((v.unwrap() - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn relational_parity_parity_all_routes() {
        let f = function_as_relation(&parity(2).unwrap());
        let r = relational_composition_check(&f, &parity(2).unwrap(), &CompositionOptions::default()).unwrap();
        assert!(r.pass, "{:?}", r.failed_checks().collect::<Vec<_>>());
        for v in [r.lower_value, r.upper_value, r.direct_value] {
            assert!((v.unwrap() - 4.0).abs() < 5e-3);
        }
        let ver = r.verifiability.unwrap();
        assert_eq!(ver.slices.len(), 2);
    }

    #[test]
    fn skipped_direct_route() {
        let f = function_as_relation(&parity(2).unwrap());
        let opts = CompositionOptions { direct: DirectMode::Skip, verifiability: false, ..Default::default() };
        let r = relational_composition_check(&f, &and(2).unwrap(), &opts).unwrap();
        assert!(r.direct_value.is_none() && r.verifiability.is_none());
        assert!(r.pass, "{:?}", r.failed_checks().collect::<Vec<_>>());
        assert!((r.upper_value.unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-3);
    }
}
