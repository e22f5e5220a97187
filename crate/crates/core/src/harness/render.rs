use std::fmt::Write;

use super::scenario::RunReport;
use crate::composition::{Check, CompositionReport};

fn verdict(pass: bool) -> &'static str {
    if pass { "pass" } else { "FAIL" }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.9}")).unwrap_or_else(|| "-".into())
}

fn short(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e6) {
        format!("{v:.3e}")
    } else {
        format!("{v:.6}")
    }
}

fn check_table(out: &mut String, checks: &[Check]) {
    out.push_str("| check | residual | tolerance | verdict |\n|---|---|---|---|\n");
    for c in checks {
        let _ = writeln!(out, "| {} | {:.3e} | {:.1e} | {} |", c.name, c.residual, c.tolerance, verdict(c.pass));
    }
}

pub fn run_report_markdown(report: &RunReport) -> String {
    let mut out = String::new();
    let fp = &report.fingerprint;
    let _ = writeln!(out, "# Run report\n");
    let _ = writeln!(
        out,
        "version {}, seed {}, solver tol {:.1e}, direct {:?}: **{}**\n",
        fp.version,
        fp.seed,
        fp.solver_tol,
        fp.direct,
        verdict(report.pass)
    );
    out.push_str("| scenario | verdict | values | ms |\n|---|---|---|---|\n");
    for s in &report.scenarios {
        let values = match &s.error {
            Some(e) => format!("error: {e}"),
            None => s.values.iter().map(|(k, v)| format!("{k}={}", short(*v))).collect::<Vec<_>>().join(", "),
        };
        let _ = writeln!(out, "| {} | {} | {} | {:.0} |", s.name, verdict(s.pass), values, s.wall_ms);
    }
    for s in report.scenarios.iter().filter(|s| !s.pass && s.error.is_none()) {
        let _ = writeln!(out, "\n## {}\n", s.name);
        let failed: Vec<Check> = s.checks.iter().filter(|c| !c.pass).cloned().collect();
        check_table(&mut out, &failed);
    }
    out
}

pub fn composition_markdown(report: &CompositionReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Composition ({:?}): **{}**\n", report.kind, verdict(report.pass));
    let _ = writeln!(out, "| quantity | value |\n|---|---|");
    let _ = writeln!(out, "| outer | {:.9} |", report.outer_value);
    let _ = writeln!(out, "| inner | {:.9} |", report.inner_value);
    let _ = writeln!(out, "| product | {:.9} |", report.product_value);
    let _ = writeln!(out, "| lower | {} |", fmt_opt(report.lower_value));
    let _ = writeln!(out, "| upper | {} |", fmt_opt(report.upper_value));
    let _ = writeln!(out, "| direct | {} |\n", fmt_opt(report.direct_value));
    check_table(&mut out, &report.checks);
    if let Some(v) = &report.verifiability {
        out.push_str("\n| a | ADV±(h_a) | ratio |\n|---|---|---|\n");
        for s in &v.slices {
            let _ = writeln!(out, "| {} | {:.6} | {} |", s.a, s.slice_value, fmt_opt(s.ratio));
        }
    }
    for w in &report.warnings {
        let _ = writeln!(out, "\n> {w}");
    }
    out
}
