//! Key-value run configuration: a plain text file of `key = value` lines
//! mirroring the command-line flags. Flags override file values; unknown
//! keys are rejected before any computation starts.

use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!(
                    "{}:{}: expected 'key = value', got '{line}'",
                    path.display(),
                    idx + 1
                ));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Config { values })
    }

    /// Rejects any key outside the known set for the invoked command.
    pub fn validate_keys(&self, known: &[&str]) -> Result<(), String> {
        for key in self.values.keys() {
            if !known.contains(&key.as_str()) {
                return Err(format!(
                    "unknown config key '{key}' (known: {})",
                    known.join(", ")
                ));
            }
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }
}

/// Flag value if given, else config value, else None.
pub fn resolve<T: std::str::FromStr>(
    flag: Option<T>,
    config: &Config,
    key: &str,
) -> Result<Option<T>, String> {
    if flag.is_some() {
        return Ok(flag);
    }
    match config.get(key) {
        None => Ok(None),
        Some(text) => text
            .parse::<T>()
            .map(Some)
            .map_err(|_| format!("config key '{key}': cannot parse '{text}'")),
    }
}

/// Like [`resolve`] but with a default.
pub fn resolve_or<T: std::str::FromStr>(
    flag: Option<T>,
    config: &Config,
    key: &str,
    default: T,
) -> Result<T, String> {
    Ok(resolve(flag, config, key)?.unwrap_or(default))
}

/// Like [`resolve`] but the value is required.
pub fn require<T: std::str::FromStr>(
    flag: Option<T>,
    config: &Config,
    key: &str,
) -> Result<T, String> {
    resolve(flag, config, key)?.ok_or_else(|| format!("missing required option --{key}"))
}
