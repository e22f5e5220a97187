use serde::Serialize;

use super::lower::LowerReport;
use crate::adversary::VerifiabilityReport;

/// A named residual and the bound it must not exceed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `residual ≤ tolerance`; NaN fails.
    pub fn at_most(name: &str, residual: f64, tolerance: f64) -> Self {
        Self { name: name.to_string(), residual, tolerance, pass: residual <= tolerance }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CompositionKind {
    Functional,
    Relational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositionReport {
    pub kind: CompositionKind,
    /// `ADV±(f)` or `ADV_rel±(f)`.
    pub outer_value: f64,
    /// `ADV±(g)`.
    pub inner_value: f64,
    pub product_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direct_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<LowerReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verifiability: Option<VerifiabilityReport>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub pass: bool,
}

impl CompositionReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Recomputes the verdict from the checks.
    pub(crate) fn finish(mut self) -> Self {
        self.pass = self.checks.iter().all(|c| c.pass);
        self
    }
}
