//! `key = value` settings files. Keys are the long flag names.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::failure::Failure;

const KNOWN_KEYS: &[&str] =
    &["grid-min", "grid-max", "points-per-decade", "window", "mesh", "trim", "mean", "tol", "seed"];

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
    origin: String,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, Failure> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Failure::usage(format!("{origin}:{}: expected key = value", i + 1)));
            };
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(Failure::usage(format!("{origin}:{}: unknown key '{key}'", i + 1)));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Self { values, origin: origin.to_string() })
    }

    /// The flag value if given, else the file value, else `None`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, Failure> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Failure::usage(format!("{}: bad value '{v}' for {key}", self.origin))),
        }
    }
}
