use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;

use crate::boolean::library::{function_by_name, relation_by_name};
use crate::boolean::{function_as_relation, BooleanFunction, Relation};
use crate::error::{AdvError, Result};

pub const FIXTURES_ENV: &str = "ADVLAB_FIXTURES";

pub fn fixture_dir() -> PathBuf {
    env::var_os(FIXTURES_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("fixtures"))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| AdvError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| AdvError::Config(format!("{}: {e}", path.display())))
}

/// A file named directly, or `<name>.json` in the fixture directory.
fn locate(input: &str) -> Option<PathBuf> {
    let direct = PathBuf::from(input);
    if direct.is_file() {
        return Some(direct);
    }
    let dir = fixture_dir();
    [dir.join(input), dir.join(format!("{input}.json"))].into_iter().find(|p| p.is_file())
}

/// Resolves a path, a fixture name, or a built-in library name.
pub fn load_function(input: &str) -> Result<BooleanFunction> {
    if let Some(path) = locate(input) {
        return read_json(&path);
    }
    function_by_name(input).ok_or_else(|| AdvError::Config(format!("no function file, fixture or built-in named {input:?}")))
}

/// As [`load_function`] for relations. Function files are accepted and read as
/// relations with `K = 2`.
pub fn load_relation(input: &str) -> Result<Relation> {
    if let Some(path) = locate(input) {
        let value: serde_json::Value = read_json(&path)?;
        let parsed = if value.get("incidence").is_some() {
            serde_json::from_value::<Relation>(value)
        } else {
            serde_json::from_value::<BooleanFunction>(value).map(|g| function_as_relation(&g))
        };
        return parsed.map_err(|e| AdvError::Config(format!("{}: {e}", path.display())));
    }
    if let Some(f) = relation_by_name(input) {
        return Ok(f);
    }
    function_by_name(input)
        .map(|g| function_as_relation(&g))
        .ok_or_else(|| AdvError::Config(format!("no relation file, fixture or built-in named {input:?}")))
}
