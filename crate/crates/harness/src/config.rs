//! Optional `key = value` configuration file. Values are TOML scalars; bare
//! words are read as strings, so `fixture = exN-favored-one` works unquoted.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use toml::Value;

use crate::HarnessError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, Value>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::Config(format!("config line {}: expected key = value", n + 1)))?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            let parsed = toml::from_str::<toml::Table>(&format!("v = {value}"))
                .ok()
                .and_then(|mut t| t.remove("v"))
                .unwrap_or_else(|| Value::String(value.to_string()));
            values.insert(key, parsed);
        }
        Ok(ConfigFile { values })
    }

    fn bad(key: &str, want: &str) -> HarnessError {
        HarnessError::Config(format!("config key {key} must be {want}"))
    }

    pub fn string(&self, key: &str) -> Result<Option<String>, HarnessError> {
        Ok(match self.values.get(key) {
            None => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(Value::Array(_) | Value::Table(_)) => return Err(Self::bad(key, "a scalar")),
            Some(v) => Some(v.to_string()),
        })
    }

    pub fn float(&self, key: &str) -> Result<Option<f64>, HarnessError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(Value::Float(x)) => Ok(Some(*x)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(_) => Err(Self::bad(key, "a number")),
        }
    }

    pub fn uint(&self, key: &str) -> Result<Option<u64>, HarnessError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as u64)),
            Some(_) => Err(Self::bad(key, "a non-negative integer")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_scalars_and_bare_words() {
        let c = ConfigFile::parse("# run\nfixture = exN-favored-one\ntol = 1e-8\nseed = 7\nmax-iters = 100\nsuite = \"maximal,cones\"\n")
            .unwrap();
        assert_eq!(c.string("fixture").unwrap().as_deref(), Some("exN-favored-one"));
        assert_eq!(c.float("tol").unwrap(), Some(1e-8));
        assert_eq!(c.uint("seed").unwrap(), Some(7));
        assert_eq!(c.uint("max_iters").unwrap(), Some(100));
        assert_eq!(c.string("suite").unwrap().as_deref(), Some("maximal,cones"));
        assert!(c.float("fixture").is_err());
        assert!(ConfigFile::parse("no equals sign").is_err());
    }
}
