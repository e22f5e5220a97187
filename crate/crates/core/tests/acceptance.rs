//! Acceptance criteria 1–10. Each test writes one `criterion N: PASS|FAIL`
//! line to stderr (outside the test harness's capture) and then asserts.
//!
//! Set `ADVLAB_SKIP_DIRECT=1` to skip the direct solves of criterion 5.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use advlab::adversary::{
    adv_primal_value, assemble_target_states, curated_functional, solve_adv, solve_adv_rel, AdvOptions,
};
use advlab::boolean::library::{all_pairs, function_by_name, relation_by_name, FUNCTION_NAMES, RELATION_NAMES};
use advlab::boolean::{function_as_relation, Relation};
use advlab::composition::{
    functional_composition_check, relational_composition_check, CompositionOptions, CompositionReport, DirectMode,
};
use advlab::harness::{run_battery, BatteryKind, FINDONE2_VALUE};

const SQRT2: f64 = std::f64::consts::SQRT_2;

fn report(n: u32, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!("criterion {n:>2}: {verdict}  {detail}\n");
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
    assert!(pass, "criterion {n} failed: {detail}");
}

fn failed(list: &[String]) -> String {
    if list.is_empty() { String::new() } else { format!(" failed: {}", list.join("; ")) }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn opts() -> AdvOptions {
    AdvOptions::default()
}

#[test]
fn criterion_01_functional_values() {
    let cases = [("identity1", 1.0), ("or2", SQRT2), ("and2", SQRT2), ("parity2", 2.0)];
    let mut failures = Vec::new();
    let mut detail = Vec::new();
    for (name, expected) in cases {
        let g = function_by_name(name).unwrap();
        let (solve, dt) = timed(|| solve_adv(&g, &opts()).unwrap());
        let primal = adv_primal_value(&curated_functional(name).unwrap()).unwrap();
        detail.push(format!("{name}={:.6}", solve.value));
        if (solve.value - expected).abs() > 1e-4 || primal > solve.value + 1e-6 || dt > Duration::from_secs(5) {
            failures.push(format!("{name}: value {} primal {primal} in {dt:?}", solve.value));
        }
    }
    report(1, failures.is_empty(), &format!("{}{}", detail.join(" "), failed(&failures)));
}

#[test]
fn criterion_02_functional_composition() {
    let mut failures = Vec::new();
    let mut detail = Vec::new();
    for (f, g) in [("parity2", "parity2"), ("or2", "and2"), ("and2", "or2")] {
        let (r, dt) = timed(|| {
            functional_composition_check(
                &function_by_name(f).unwrap(),
                &function_by_name(g).unwrap(),
                &CompositionOptions::default(),
            )
            .unwrap()
        });
        let direct = r.direct_value.unwrap();
        detail.push(format!("{f}∘{g}={direct:.6}"));
        if (direct - r.product_value).abs() > 1e-3 * r.product_value || dt > Duration::from_secs(60) {
            failures.push(format!("{f}∘{g}: {direct} vs {} in {dt:?}", r.product_value));
        }
    }
    report(2, failures.is_empty(), &format!("{}{}", detail.join(" "), failed(&failures)));
}

#[test]
fn criterion_03_all_pairs_relation() {
    let mut worst: f64 = 0.0;
    for n in 1..=2 {
        for k in 1..=2 {
            worst = worst.max(solve_adv_rel(&all_pairs(n, k).unwrap(), &opts()).unwrap().value.abs());
        }
    }
    report(3, worst <= 1e-5, &format!("max |ADV_rel±(all-pairs)| = {worst:.2e}"));
}

#[test]
fn criterion_04_function_as_relation() {
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for name in ["identity1", "or2", "parity2"] {
        let g = function_by_name(name).unwrap();
        let fun = solve_adv(&g, &opts()).unwrap().value;
        let rel = solve_adv_rel(&function_as_relation(&g), &opts()).unwrap().value;
        let gap = (rel - fun).abs();
        worst = worst.max(gap);
        if gap > 1e-3 * (1.0 + fun) {
            failures.push(format!("{name}: {rel} vs {fun}"));
        }
    }
    report(4, failures.is_empty(), &format!("max gap {worst:.2e}{}", failed(&failures)));
}

fn skip_direct() -> bool {
    std::env::var("ADVLAB_SKIP_DIRECT").is_ok_and(|v| !v.is_empty() && v != "0")
}

fn composition_pairs() -> Vec<(&'static str, &'static str, Relation, f64)> {
    let mut v = Vec::new();
    for (f, fv) in [("parity2-rel", 2.0), ("findone2", FINDONE2_VALUE)] {
        for (g, gv) in [("and2", SQRT2), ("parity2", 2.0)] {
            v.push((f, g, relation_by_name(f).unwrap(), fv * gv));
        }
    }
    v
}

fn run_pair(f: &Relation, g: &str, direct: DirectMode) -> (CompositionReport, Duration) {
    let copts = CompositionOptions { direct, ..CompositionOptions::default() };
    timed(|| relational_composition_check(f, &function_by_name(g).unwrap(), &copts).unwrap())
}

#[test]
fn criterion_05_composition_three_routes() {
    let mode = if skip_direct() { DirectMode::Skip } else { DirectMode::Force };
    let mut failures = Vec::new();
    let mut detail = Vec::new();
    for (fname, gname, f, expected) in composition_pairs() {
        let (r, dt) = run_pair(&f, gname, mode);
        let (lo, up) = (r.lower_value.unwrap(), r.upper_value.unwrap());
        let scale = up.abs().max(1.0);
        let mut ok = (up - lo).abs() <= 1e-2 * scale && lo <= up + 1e-3 && (up - expected).abs() <= 1e-2 * expected;
        if let Some(d) = r.direct_value {
            ok &= lo <= d + 1e-3 && d <= up + 1e-3 && (d - up).abs() <= 1e-2 * scale;
            ok &= dt <= Duration::from_secs(600);
        }
        detail.push(format!("{fname}∘{gname}: {lo:.6}/{up:.6}/{}", r.direct_value.map_or("-".into(), |d| format!("{d:.6}"))));
        if !ok {
            failures.push(format!("{fname}∘{gname}"));
        }
    }
    let note = if skip_direct() { " (direct skipped)" } else { "" };
    report(5, failures.is_empty(), &format!("lower/upper/direct {}{note}{}", detail.join(", "), failed(&failures)));
}

#[test]
fn criterion_06_lower_item_checks() {
    let mut failures = Vec::new();
    let (mut item1, mut item2, mut item3, mut claim): (f64, f64, f64, f64) = (0.0, f64::NEG_INFINITY, f64::INFINITY, 0.0);
    for (fname, gname, f, _) in composition_pairs() {
        let (r, _) = run_pair(&f, gname, DirectMode::Skip);
        let lower = r.lower.expect("non-constant inner function");
        let scale = 1.0 + lower.expected_lambda_max.abs();
        let r1 = (lower.lambda_max - lower.expected_lambda_max).abs() / scale;
        let r2 = lower.nsd_margins.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let r3 = lower.norm_bounds.iter().map(|b| b.slack).fold(f64::INFINITY, f64::min);
        let rc = lower.claim_residual.max(lower.last_bit_residual);
        item1 = item1.max(r1);
        item2 = item2.max(r2);
        item3 = item3.min(r3);
        claim = claim.max(rc);
        if r1 > 1e-6 || r2 > 1e-7 || r3 < -1e-8 || rc > 1e-10 {
            failures.push(format!("{fname}∘{gname}"));
        }
    }
    report(
        6,
        failures.is_empty(),
        &format!("item1 {item1:.1e}, max NSD margin {item2:.1e}, min slack {item3:.1e}, claim {claim:.1e}{}", failed(&failures)),
    );
}

#[test]
fn criterion_07_spectral_lemma_battery() {
    let (r, dt) = timed(|| run_battery(BatteryKind::SpectralLemma, 7, 200, &opts()).unwrap());
    let pass = r.failures == 0 && r.trials == 200 && dt <= Duration::from_secs(30);
    report(7, pass, &format!("{}/{} pass, worst residual {:.1e}, {dt:.2?}", r.trials - r.failures, r.trials, r.worst_residual));
}

#[test]
fn criterion_08_hat_and_closure_batteries() {
    let hat = run_battery(BatteryKind::HatPsd, 7, 200, &opts()).unwrap();
    let closure = run_battery(BatteryKind::PsdClosure, 7, 200, &opts()).unwrap();
    let pass = hat.failures == 0 && closure.failures == 0 && hat.tolerance <= 1e-10 && closure.tolerance <= 1e-10;
    report(
        8,
        pass,
        &format!(
            "hat-PSD {}/200 (worst {:.1e}), closure {}/200 (worst {:.1e})",
            200 - hat.failures,
            hat.worst_residual,
            200 - closure.failures,
            closure.worst_residual
        ),
    );
}

#[test]
fn criterion_09_witness_hygiene() {
    let mut failures = Vec::new();
    let mut worst_residual: f64 = 0.0;
    let mut worst_norm: f64 = 0.0;
    for name in FUNCTION_NAMES {
        let w = solve_adv(&function_by_name(name).unwrap(), &opts()).unwrap();
        let r = w.certificate.residual("witness_constraint").unwrap();
        worst_residual = worst_residual.max(r);
        if r > 1e-6 {
            failures.push(format!("{name}: residual {r:e}"));
        }
    }
    for name in RELATION_NAMES {
        let f = relation_by_name(name).unwrap();
        let s = solve_adv_rel(&f, &opts()).unwrap();
        let r = s.certificate.residual("witness_constraint").unwrap();
        worst_residual = worst_residual.max(r);
        let norm = assemble_target_states(&f, &s.witness).unwrap().normalization_error();
        worst_norm = worst_norm.max(norm);
        if r > 1e-6 || norm > 2e-6 {
            failures.push(format!("{name}: residual {r:e}, normalization {norm:e}"));
        }
    }
    let perturbation = run_battery(BatteryKind::Perturbation, 7, 100, &opts()).unwrap();
    if perturbation.failures > 0 {
        failures.push(format!("perturbation: {} failures", perturbation.failures));
    }
    report(
        9,
        failures.is_empty(),
        &format!(
            "worst residual {worst_residual:.1e}, worst |‖ψ‖²−1| {worst_norm:.1e}, perturbation {}/100{}",
            100 - perturbation.failures,
            failed(&failures)
        ),
    );
}

fn battery_json() -> serde_json::Value {
    let out = Command::new(env!("CARGO_BIN_EXE_adv")).args(["battery", "--seed", "7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for s in v["scenarios"].as_array_mut().unwrap() {
        s.as_object_mut().unwrap().remove("wall_ms");
    }
    v
}

#[test]
fn criterion_10_battery_determinism() {
    let a = serde_json::to_string(&battery_json()).unwrap();
    let b = serde_json::to_string(&battery_json()).unwrap();
    report(10, a == b, &format!("two `adv battery --seed 7` runs, {} bytes, identical: {}", a.len(), a == b));
}
