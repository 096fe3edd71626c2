//! Effective run configuration: defaults, then a `key = value` file, then
//! command-line flags.

use std::collections::BTreeMap;
use std::str::FromStr;

use clap::parser::ValueSource;
use clap::ArgMatches;
use dac_core::rational::{self, Q};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown key {key:?} for `{command}`")]
    UnknownKey { key: String, command: String },
    #[error("missing required setting {0:?}")]
    Missing(String),
    #[error("bad value {value:?} for {key:?}: {msg}")]
    Value { key: String, value: String, msg: String },
}

/// Keys that steer execution but never change the output; they are left
/// out of the echoed header.
const EXECUTION_KEYS: [&str; 3] = ["threads", "out", "config"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: String,
    values: BTreeMap<String, String>,
}

pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: n + 1,
            msg: format!("expected `key = value`, got {line:?}"),
        })?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                line: n + 1,
                msg: "empty key".into(),
            });
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

fn raw_values(m: &ArgMatches, id: &str) -> Option<String> {
    let vals = m.get_raw(id)?;
    Some(vals.map(|v| v.to_string_lossy().into_owned()).collect::<Vec<_>>().join(" "))
}

impl RunConfig {
    /// Merges defaults, the file contents and explicit flags of one
    /// subcommand, in increasing precedence.
    /// `known` lists every argument id the subcommand accepts.
    pub fn resolve(command: &str, known: &[String], m: &ArgMatches, file: Option<BTreeMap<String, String>>) -> Result<Self, ConfigError> {
        let mut values = BTreeMap::new();
        for id in known {
            if m.value_source(id) == Some(ValueSource::DefaultValue) {
                if let Some(v) = raw_values(m, id) {
                    values.insert(id.clone(), v);
                }
            }
        }
        for (k, v) in file.unwrap_or_default() {
            if !known.contains(&k) || k == "config" {
                return Err(ConfigError::UnknownKey {
                    key: k,
                    command: command.into(),
                });
            }
            values.insert(k, v);
        }
        for id in known {
            if m.value_source(id) == Some(ValueSource::CommandLine) {
                if let Some(v) = raw_values(m, id) {
                    values.insert(id.clone(), v);
                }
            }
        }
        Ok(RunConfig {
            command: command.into(),
            values,
        })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn bad(key: &str, value: &str, msg: impl ToString) -> ConfigError {
        ConfigError::Value {
            key: key.into(),
            value: value.into(),
            msg: msg.to_string(),
        }
    }

    pub fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: ToString,
    {
        self.raw(key).map(|v| v.parse::<T>().map_err(|e| Self::bad(key, v, e))).transpose()
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T, ConfigError>
    where
        T::Err: ToString,
    {
        self.opt(key)?.ok_or_else(|| ConfigError::Missing(key.into()))
    }

    /// Rational from `a/b` or an exact decimal.
    pub fn rational(&self, key: &str) -> Result<Option<Q>, ConfigError> {
        self.raw(key).map(|v| rational::parse(v).map_err(|e| Self::bad(key, v, e))).transpose()
    }

    pub fn rationals(&self, key: &str) -> Result<Option<Vec<Q>>, ConfigError> {
        self.raw(key)
            .map(|v| v.split([' ', ',']).filter(|s| !s.is_empty()).map(|s| rational::parse(s).map_err(|e| Self::bad(key, v, e))).collect())
            .transpose()
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, ConfigError>
    where
        T::Err: ToString,
    {
        self.raw(key)
            .map(|v| v.split([' ', ',']).filter(|s| !s.is_empty()).map(|s| s.parse::<T>().map_err(|e| Self::bad(key, v, e))).collect())
            .transpose()
    }

    /// A grid given as `start:stop:step` (inclusive, exact arithmetic) or
    /// as a list.
    pub fn grid(&self, key: &str) -> Result<Option<Vec<Q>>, ConfigError> {
        let Some(v) = self.raw(key) else { return Ok(None) };
        let parts: Vec<&str> = v.split(':').collect();
        if parts.len() != 3 {
            return self.rationals(key);
        }
        let p = |s: &str| rational::parse(s).map_err(|e| Self::bad(key, v, e));
        let (start, stop, step) = (p(parts[0])?, p(parts[1])?, p(parts[2])?);
        if step <= Q::from_integer(0.into()) || stop < start {
            return Err(Self::bad(key, v, "need start <= stop and a positive step"));
        }
        let mut out = Vec::new();
        let mut x = start;
        while x <= stop {
            out.push(x.clone());
            x += &step;
            if out.len() > 10_000 {
                return Err(Self::bad(key, v, "more than 10000 grid points"));
            }
        }
        Ok(Some(out))
    }

    /// `# key = value` lines describing the run.
    pub fn header(&self) -> String {
        let mut s = format!("# command = {}\n", self.command);
        for (k, v) in &self.values {
            if !EXECUTION_KEYS.contains(&k.as_str()) {
                s.push_str(&format!("# {k} = {v}\n"));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_syntax() {
        let m = parse_config_text("# c\np = 0.25\nmax_edges = 12\n\n").unwrap();
        assert_eq!(m["p"], "0.25");
        assert_eq!(m["max-edges"], "12");
        assert!(parse_config_text("p 0.25").is_err());
        assert!(parse_config_text(" = 3").is_err());
    }
}
