//! Flat key-value configuration files.
//!
//! Format: one `key = value` pair per line; `#` starts a comment. Keys
//! mirror the long command-line flags (dashes or underscores both work)
//! and explicit flags override file values. Unknown keys are rejected.

use crate::error::CliError;
use std::collections::BTreeMap;

const KNOWN_KEYS: &[&str] = &[
    "delta",
    "xi",
    "max_imfs",
    "extension_factor",
    "max_inner_iterations",
    "samples",
    "seed",
    "gamma",
    "snr_db",
    "rate",
    "seeds",
    "method",
    "truth_crossings",
    "monotonic_segments",
];

#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim().replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key '{key}'",
                    lineno + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.values
            .get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("config key '{key}': not a number: {v}")))
            })
            .transpose()
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.values
            .get(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| CliError::Usage(format!("config key '{key}': not an integer: {v}")))
            })
            .transpose()
    }

    pub fn get_bool(&self, key: &str) -> Result<Option<bool>, CliError> {
        self.values
            .get(key)
            .map(|v| match v.as_str() {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                other => Err(CliError::Usage(format!(
                    "config key '{key}': not a boolean: {other}"
                ))),
            })
            .transpose()
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}
