use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use advlab::adversary::{
    relational_residual, solve_adv, solve_adv_rel, AdvOptions, FunctionalAdversaryMatrix, RelationalAdversaryMatrix,
};
use advlab::boolean::library::{function_by_name, relation_by_name};
use advlab::boolean::{compose_relation, BooleanFunction, Relation};
use advlab::composition::{
    compose_adversary_matrices, compose_dual_witnesses, relational_composition_check, verify_composed_lower,
    CompositionOptions, LowerTolerances,
};
use advlab::harness::{random_matrix, random_symmetric, trial_rng};

const OUTER: &[&str] = &["parity2-rel", "findone2", "or2-rel", "identity1-rel", "allpairs2"];
const INNER: &[&str] = &["identity1", "not1", "and2", "or2", "parity2"];

fn outer(name: &str) -> Relation {
    relation_by_name(name).unwrap()
}

fn inner(name: &str) -> BooleanFunction {
    function_by_name(name).unwrap()
}

/// A random symmetric matrix shifted until every `Γ ∘ χ_aχ_aᵀ` is NSD.
fn random_relational(rng: &mut impl Rng, f: &Relation) -> RelationalAdversaryMatrix {
    let mut gamma = random_symmetric(rng, f.size());
    let probe = RelationalAdversaryMatrix::new(f.clone(), gamma.clone()).unwrap();
    let shift = probe.nsd_margins().unwrap().into_iter().fold(0.0, f64::max);
    for x in 0..f.size() {
        gamma[(x, x)] -= shift;
    }
    RelationalAdversaryMatrix::new(f.clone(), gamma).unwrap()
}

fn random_functional(rng: &mut impl Rng, g: &BooleanFunction) -> FunctionalAdversaryMatrix {
    let z = random_matrix(rng, g.preimage(false).len(), g.preimage(true).len());
    FunctionalAdversaryMatrix::from_z(g.clone(), &z).unwrap()
}

#[test]
fn lower_construction_is_sound_on_random_feasible_pairs() {
    let failures: Vec<String> = (0..50)
        .into_par_iter()
        .flat_map_iter(|t| {
            let mut rng = trial_rng(2024, t);
            let f = outer(OUTER.choose(&mut rng).unwrap());
            let g = inner(INNER.choose(&mut rng).unwrap());
            let gamma_f = random_relational(&mut rng, &f);
            let gamma_g = random_functional(&mut rng, &g);
            let report = verify_composed_lower(&gamma_f, &gamma_g, &LowerTolerances::default()).unwrap();
            report.checks.into_iter().filter(|c| !c.pass).map(move |c| format!("trial {t}: {c:?}"))
        })
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn item3_slack_on_two_by_two_blocks() {
    for t in 0..100 {
        let mut rng = trial_rng(99, t);
        let f = outer(["parity2-rel", "findone2", "or2-rel"].choose(&mut rng).unwrap());
        let g = inner(["and2", "or2", "parity2"].choose(&mut rng).unwrap());
        let report =
            verify_composed_lower(&random_relational(&mut rng, &f), &random_functional(&mut rng, &g), &LowerTolerances::default())
                .unwrap();
        for b in &report.norm_bounds {
            assert!(b.slack >= -1e-8, "trial {t}: {b:?}");
        }
    }
}

#[test]
fn lower_construction_on_library_certificates() {
    let opts = AdvOptions::default();
    for &fname in OUTER {
        let f = outer(fname);
        let gamma_f = solve_adv_rel(&f, &opts).unwrap().gamma;
        for &gname in INNER {
            let g = inner(gname);
            let (gamma_g, _) = advlab::adversary::optimal_adversary_matrix(&g, &opts).unwrap();
            let h = compose_adversary_matrices(&gamma_f, &gamma_g).unwrap();
            let worst = h.nsd_margins().unwrap().into_iter().fold(f64::NEG_INFINITY, f64::max);
            assert!(worst <= 1e-7, "{fname} ∘ {gname}: NSD margin {worst:e}");
        }
    }
}

#[test]
fn upper_construction_is_sound_under_rescaling() {
    let opts = AdvOptions::default();
    let outer_witnesses: Vec<_> = OUTER.iter().map(|&n| (outer(n), solve_adv_rel(&outer(n), &opts).unwrap().witness)).collect();
    let inner_witnesses: Vec<_> = INNER.iter().map(|&n| (inner(n), solve_adv(&inner(n), &opts).unwrap().witness)).collect();
    for t in 0..50 {
        let mut rng = trial_rng(7, t);
        let (f, w_f) = outer_witnesses.choose(&mut rng).unwrap();
        let (g, w_g) = inner_witnesses.choose(&mut rng).unwrap();
        let (c_f, c_g) = (rng.gen_range(0.25..4.0), rng.gen_range(0.25..4.0));
        let w_h = compose_dual_witnesses(f, &w_f.rescaled(c_f), g, &w_g.rescaled(c_g)).unwrap();
        let h = compose_relation(f, g).unwrap();
        let r = relational_residual(&h, &w_h).unwrap();
        assert!(r <= 1e-5, "trial {t}: residual {r:e}");
        assert!(w_h.normalization_residual() <= 1e-5);
    }
}

#[test]
fn composition_identity_on_every_fixture_pair() {
    let pairs: Vec<(&str, &str)> = OUTER.iter().flat_map(|&f| INNER.iter().map(move |&g| (f, g))).collect();
    let failures: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(fname, gname)| {
            let r = relational_composition_check(&outer(fname), &inner(gname), &CompositionOptions::default()).unwrap();
            let (lo, up) = (r.lower_value.unwrap(), r.upper_value.unwrap());
            let mut bad = Vec::new();
            if up - lo > 1e-2 * (1.0 + up) {
                bad.push(format!("gap {lo} {up}"));
            }
            if let Some(d) = r.direct_value {
                if d < lo - 1e-2 * (1.0 + up) || d > up + 1e-2 * (1.0 + up) {
                    bad.push(format!("direct {d} outside [{lo}, {up}]"));
                }
            }
            if !r.pass {
                bad.extend(r.failed_checks().map(|c| format!("{c:?}")));
            }
            (!bad.is_empty()).then(|| format!("{fname} ∘ {gname}: {bad:?}"))
        })
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

/// The frozen FIND-ONE₂ constant against its two oracles: the SDP dual value
/// and the primal value of the hand-built matrix.
#[test]
fn frozen_findone2_constant_matches_its_oracles() {
    use advlab::adversary::{adv_rel_primal_value, curated_relational};
    use advlab::harness::FINDONE2_VALUE;
    let sdp = solve_adv_rel(&outer("findone2"), &AdvOptions::default()).unwrap();
    let primal = adv_rel_primal_value(&curated_relational("findone2").unwrap()).unwrap();
    assert!((sdp.value - FINDONE2_VALUE).abs() < 1e-6);
    assert!((sdp.primal_value - FINDONE2_VALUE).abs() < 1e-6);
    assert_eq!(primal, FINDONE2_VALUE);
}
