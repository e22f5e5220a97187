//! Fixture resolution, seeded property batteries, the scenario registry and
//! runner, and report rendering. The `adv` binary is a thin layer over this.

mod battery;
mod inputs;
mod render;
mod rng;
mod scenario;

pub use battery::{run_battery, BatteryKind, BatteryReport};
pub use inputs::{fixture_dir, load_function, load_relation, read_json, FIXTURES_ENV};
pub use render::{composition_markdown, run_report_markdown};
pub use rng::{random_matrix, random_psd, random_symmetric, random_unit, trial_rng};
pub use scenario::{
    battery_scenarios, find_scenario, registry, run_scenario, run_scenarios, Expectation, Fingerprint, HarnessConfig,
    Pipeline, Provenance, RunReport, Scenario, ScenarioResult, FINDONE2_VALUE,
};
