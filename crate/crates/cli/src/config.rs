//! Declarative configuration file: `key = value` lines with optional
//! `[scan]` / `[verify]` sections and `#` comments. Command-line flags
//! override file values, which override the built-in defaults.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}:{line}: malformed line (expected 'key = value'): {text}")]
    Malformed { path: String, line: usize, text: String },

    #[error("{path}:{line}: unknown key '{key}'")]
    UnknownKey { path: String, line: usize, key: String },

    #[error("{path}:{line}: field '{key}': {message}")]
    BadValue { path: String, line: usize, key: String, message: String },

    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

const KNOWN_KEYS: &[&str] = &[
    "scheme", "r", "r-min", "r-max", "r-steps", "loss", "split", "gains", "samples", "pairs",
    "seed", "format", "out", "fast", "logneg-bits",
];

/// Parsed file: section -> key -> (value, line number). The empty section
/// holds keys that appear before any section header and applies everywhere.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    path: String,
    values: BTreeMap<String, BTreeMap<String, (String, usize)>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&path.display().to_string(), &text)
    }

    pub fn parse(path: &str, text: &str) -> Result<Self, ConfigError> {
        let mut values: BTreeMap<String, BTreeMap<String, (String, usize)>> = BTreeMap::new();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = raw.split('#').next().unwrap_or("").trim();
            if stripped.is_empty() {
                continue;
            }
            if stripped.starts_with('[') && stripped.ends_with(']') {
                section = stripped[1..stripped.len() - 1].trim().to_string();
                continue;
            }
            let Some((key, value)) = stripped.split_once('=') else {
                return Err(ConfigError::Malformed {
                    path: path.to_string(),
                    line,
                    text: stripped.to_string(),
                });
            };
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(ConfigError::UnknownKey { path: path.to_string(), line, key });
            }
            values
                .entry(section.clone())
                .or_default()
                .insert(key, (value.trim().to_string(), line));
        }
        Ok(Self { path: path.to_string(), values })
    }

    /// Raw value lookup: the subcommand section wins over the global section.
    pub fn get(&self, section: &str, key: &str) -> Option<&(String, usize)> {
        self.values
            .get(section)
            .and_then(|m| m.get(key))
            .or_else(|| self.values.get("").and_then(|m| m.get(key)))
    }

    pub fn parse_value<T: std::str::FromStr>(
        &self,
        section: &str,
        key: &str,
    ) -> Result<Option<T>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(section, key) {
            None => Ok(None),
            Some((text, line)) => text.parse::<T>().map(Some).map_err(|e| {
                ConfigError::BadValue {
                    path: self.path.clone(),
                    line: *line,
                    key: key.to_string(),
                    message: e.to_string(),
                }
            }),
        }
    }
}
