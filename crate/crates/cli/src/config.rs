//! Flat `key = value` scenario files.
//!
//! ```text
//! # redshift between two clocks
//! units = geometric
//! g = 1
//! b = 0.1
//! E = 1
//! output = redshift.csv
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rindler_lab_core::units::UnitSystem;

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScenarioConfig {
    entries: BTreeMap<String, String>,
}

impl FromStr for ScenarioConfig {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (index, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    index + 1
                )));
            };
            let key = key.trim();
            if key.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key", index + 1)));
            }
            if entries.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(CliError::Config(format!("line {}: duplicate key `{key}`", index + 1)));
            }
        }
        Ok(Self { entries })
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        text.parse()
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn set(&mut self, key: &str, value: String) {
        self.entries.insert(key.to_string(), value);
    }

    pub fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key)
            .ok_or_else(|| CliError::Config(format!("missing required key `{key}`")))
    }

    pub fn real(&self, key: &str) -> Result<f64, CliError> {
        parse_real(key, self.require(key)?)
    }

    pub fn real_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        self.get(key).map_or(Ok(default), |v| parse_real(key, v))
    }

    pub fn count(&self, key: &str) -> Result<usize, CliError> {
        let raw = self.require(key)?;
        raw.parse()
            .map_err(|_| CliError::Config(format!("`{key}` must be a non-negative integer, got `{raw}`")))
    }

    pub fn count_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        if self.get(key).is_some() {
            self.count(key)
        } else {
            Ok(default)
        }
    }

    /// Comma- or whitespace-separated reals.
    pub fn reals(&self, key: &str) -> Result<Vec<f64>, CliError> {
        split_list(self.require(key)?)
            .map(|v| parse_real(key, v))
            .collect()
    }

    pub fn units(&self) -> Result<UnitSystem, CliError> {
        self.get("units")
            .map_or(Ok(UnitSystem::default()), |v| v.parse().map_err(CliError::Config))
    }

    /// `c` from the file, or the unit system's value.
    pub fn light_speed(&self) -> Result<f64, CliError> {
        let units = self.units()?;
        self.real_or("c", units.speed_of_light())
    }

    pub fn hbar(&self) -> Result<f64, CliError> {
        let units = self.units()?;
        self.real_or("hbar", units.hbar())
    }

    pub fn output(&self) -> Option<PathBuf> {
        self.get("output").map(PathBuf::from)
    }

    /// `sweep = key v1 v2 ...`: one configuration per value.
    pub fn sweep(&self) -> Result<Option<(String, Vec<String>)>, CliError> {
        let Some(raw) = self.get("sweep") else {
            return Ok(None);
        };
        let mut items = split_list(raw);
        let key = items
            .next()
            .ok_or_else(|| CliError::Config("`sweep` needs a key and values".into()))?
            .trim_end_matches(':')
            .to_string();
        let values: Vec<String> = items.map(str::to_string).collect();
        if values.is_empty() {
            return Err(CliError::Config(format!("`sweep` over `{key}` lists no values")));
        }
        for v in &values {
            parse_real(&key, v)?;
        }
        Ok(Some((key, values)))
    }

    /// One configuration per sweep value, without the `sweep` key.
    pub fn expand_sweep(&self) -> Result<Vec<ScenarioConfig>, CliError> {
        let Some((key, values)) = self.sweep()? else {
            return Ok(vec![self.clone()]);
        };
        Ok(values
            .into_iter()
            .map(|v| {
                let mut point = self.clone();
                point.entries.remove("sweep");
                point.set(&key, v);
                point
            })
            .collect())
    }
}

fn split_list(raw: &str) -> impl Iterator<Item = &str> {
    raw.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
}

fn parse_real(key: &str, raw: &str) -> Result<f64, CliError> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("`{key}` must be a number, got `{raw}`")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("`{key}` must be finite, got `{raw}`")))
    }
}
