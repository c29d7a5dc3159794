//! Bundled solution records and classification tables. Every file ships
//! inside the binary; setting the `SUPERGC_DATA` environment variable to a
//! directory with the same layout overrides individual files at runtime.

use crate::scenario::{Scenario, ScenarioError};
use crate::subalg::SubalgebraList;
use crate::symalg::GoldenTable;
use std::borrow::Cow;
use std::path::PathBuf;
use thiserror::Error;

/// Environment variable naming an override data directory.
pub const DATA_ENV: &str = "SUPERGC_DATA";

/// One bundled scenario file.
pub struct BundledFile {
    /// Load name (file stem).
    pub name: &'static str,
    /// Relative path under the data directory.
    pub path: &'static str,
    /// Embedded content.
    pub text: &'static str,
}

macro_rules! bundled {
    ($name:literal) => {
        BundledFile {
            name: $name,
            path: concat!("scenarios/", $name, ".toml"),
            text: include_str!(concat!("../data/scenarios/", $name, ".toml")),
        }
    };
}

macro_rules! bundled_table {
    ($name:literal) => {
        BundledFile {
            name: $name,
            path: concat!("tables/", $name, ".toml"),
            text: include_str!(concat!("../data/tables/", $name, ".toml")),
        }
    };
}

/// All bundled solution-record scenarios.
pub static SCENARIOS: &[BundledFile] = &[
    bundled!("bosonic_translation_dilation"),
    bundled!("bosonic_translation_dilation_variant"),
    bundled!("bosonic_scaling"),
    bundled!("bosonic_scaling_curvature"),
    bundled!("fermionic_translation_dilation"),
    bundled!("fermionic_translation"),
    bundled!("fermionic_scaling"),
    bundled!("classical_exponential"),
    bundled!("classical_dilation_ode"),
];

/// All bundled golden structure-table transcriptions.
pub static TABLES: &[BundledFile] = &[
    bundled_table!("bosonic"),
    bundled_table!("fermionic"),
    bundled_table!("fermionic_constf"),
    bundled_table!("classical_finite"),
];

macro_rules! bundled_subalgebras {
    ($name:literal) => {
        BundledFile {
            name: $name,
            path: concat!("subalgebras/", $name, ".jsonl"),
            text: include_str!(concat!("../data/subalgebras/", $name, ".jsonl")),
        }
    };
}

/// All bundled subalgebra classification lists.
pub static SUBALGEBRAS: &[BundledFile] = &[
    bundled_subalgebras!("bosonic"),
    bundled_subalgebras!("fermionic"),
    bundled_subalgebras!("classical"),
];

/// Data loading failure.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("no bundled scenario named `{0}`")]
    UnknownScenario(String),
    #[error("no bundled golden table named `{0}`")]
    UnknownTable(String),
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("golden table `{name}`: {source}")]
    Table {
        name: String,
        #[source]
        source: toml::de::Error,
    },
    #[error("no bundled subalgebra list named `{0}`")]
    UnknownSubalgebraList(String),
    #[error("subalgebra list `{name}`: {source}")]
    Subalgebras {
        name: String,
        #[source]
        source: crate::subalg::SubalgError,
    },
}

fn override_dir() -> Option<PathBuf> {
    std::env::var_os(DATA_ENV).map(PathBuf::from)
}

/// Text of a bundled file, honoring the override directory. The override
/// is consulted per file; files it does not provide fall back to the
/// embedded copy.
pub fn file_text(file: &BundledFile) -> Result<Cow<'static, str>, DataError> {
    if let Some(dir) = override_dir() {
        let path = dir.join(file.path);
        if path.exists() {
            return std::fs::read_to_string(&path)
                .map(Cow::Owned)
                .map_err(|source| DataError::Io {
                    path: path.display().to_string(),
                    source,
                });
        }
    }
    Ok(Cow::Borrowed(file.text))
}

/// Names of all bundled scenarios.
pub fn scenario_names() -> Vec<&'static str> {
    SCENARIOS.iter().map(|f| f.name).collect()
}

/// Loads a bundled scenario by name, or any `.toml` path.
pub fn load_scenario(name: &str) -> Result<Scenario, DataError> {
    if name.ends_with(".toml") || name.contains('/') {
        let text = std::fs::read_to_string(name).map_err(|source| DataError::Io {
            path: name.to_string(),
            source,
        })?;
        return Ok(Scenario::from_toml(&text)?);
    }
    let file = SCENARIOS
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| DataError::UnknownScenario(name.to_string()))?;
    let text = file_text(file)?;
    Ok(Scenario::from_toml(&text)?)
}

/// Names of all bundled golden tables.
pub fn table_names() -> Vec<&'static str> {
    TABLES.iter().map(|f| f.name).collect()
}

/// Loads a bundled golden table by name, or any `.toml` path.
pub fn load_table(name: &str) -> Result<GoldenTable, DataError> {
    let parse = |name: &str, text: &str| {
        GoldenTable::from_toml(text).map_err(|source| DataError::Table {
            name: name.to_string(),
            source,
        })
    };
    if name.ends_with(".toml") || name.contains('/') {
        let text = std::fs::read_to_string(name).map_err(|source| DataError::Io {
            path: name.to_string(),
            source,
        })?;
        return parse(name, &text);
    }
    let file = TABLES
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| DataError::UnknownTable(name.to_string()))?;
    let text = file_text(file)?;
    parse(name, &text)
}

/// Names of all bundled subalgebra classification lists.
pub fn subalgebra_list_names() -> Vec<&'static str> {
    SUBALGEBRAS.iter().map(|f| f.name).collect()
}

/// Loads a bundled subalgebra list by name, or any `.jsonl` path.
pub fn load_subalgebras(name: &str) -> Result<SubalgebraList, DataError> {
    let parse = |name: &str, text: &str| {
        SubalgebraList::from_jsonl(text).map_err(|source| DataError::Subalgebras {
            name: name.to_string(),
            source,
        })
    };
    if name.ends_with(".jsonl") || name.contains('/') {
        let text = std::fs::read_to_string(name).map_err(|source| DataError::Io {
            path: name.to_string(),
            source,
        })?;
        return parse(name, &text);
    }
    let file = SUBALGEBRAS
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| DataError::UnknownSubalgebraList(name.to_string()))?;
    let text = file_text(file)?;
    parse(name, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_scenario_loads() {
        for file in SCENARIOS {
            let sc = Scenario::from_toml(file.text)
                .unwrap_or_else(|e| panic!("{} failed to load: {e}", file.name));
            assert!(!sc.name.is_empty());
        }
    }

    #[test]
    fn every_bundled_scenario_meets_its_expectations() {
        for file in SCENARIOS {
            let sc = Scenario::from_toml(file.text).unwrap();
            let run = sc
                .run()
                .unwrap_or_else(|e| panic!("{} failed to run: {e}", file.name));
            for case in &run.cases {
                assert!(
                    case.ok,
                    "{} (eps={:?}) did not meet expectations:\n{}",
                    file.name,
                    case.report.epsilon,
                    serde_json::to_string_pretty(case).unwrap()
                );
            }
        }
    }

    #[test]
    fn unknown_scenario_name_is_reported() {
        assert!(matches!(
            load_scenario("no-such-record"),
            Err(DataError::UnknownScenario(_))
        ));
    }
}
