//! Flat `key = value` settings, layered as flags over config file over preset.
//!
//! Config files hold one pair per line; `#` starts a comment and blank lines
//! are skipped. Keys are the long flag names with or without the leading
//! dashes (`f-rho` and `f_rho` are the same key).

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::CliError;

pub const KEYS: &[&str] = &[
    "preset", "protocol", "task", "d", "n", "m", "rounds", "epsilon", "f_rho", "f_tau", "seed", "out",
    "jobs",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

pub fn normalize_key(key: &str) -> String {
    key.trim().trim_start_matches("--").replace('-', "_")
}

impl Settings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), CliError> {
        let key = normalize_key(key);
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::usage(format!("unknown setting {key:?}")));
        }
        self.values.insert(key, value.into().trim().to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Entries of `other` replace ours.
    pub fn overlay(&mut self, other: &Settings) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let mut out = Settings::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("{origin}:{}: expected key = value", no + 1)))?;
            if v.trim().is_empty() {
                return Err(CliError::usage(format!("{origin}:{}: empty value for {}", no + 1, k.trim())));
            }
            out.set(k, v)
                .map_err(|e| CliError::usage(format!("{origin}:{}: {e}", no + 1)))?;
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}
