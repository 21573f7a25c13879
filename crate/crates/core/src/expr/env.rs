use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real-valued parameter bindings (`k`, `g`, `lam`, ...).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamEnv {
    values: BTreeMap<String, f64>,
}

impl ParamEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::NonFiniteParameter(name.to_string()));
        }
        self.values.insert(name.to_string(), value);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<f64> {
        match self.values.get(name) {
            Some(v) if v.is_finite() => Ok(*v),
            Some(_) => Err(Error::NonFiniteParameter(name.to_string())),
            None => Err(Error::UnboundParameter(name.to_string())),
        }
    }

    /// Parses a `name=value` binding as given on the command line.
    pub fn bind_str(&mut self, binding: &str) -> Result<()> {
        let (name, value) = binding.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("expected name=value, got `{binding}`"))
        })?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::InvalidArgument(format!(
                "bad parameter name `{name}`"
            )));
        }
        if name == "x" || name == "i" {
            return Err(Error::InvalidArgument(format!("`{name}` is reserved")));
        }
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad value in `{binding}`")))?;
        self.set(name, value)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Bindings of `other` take precedence.
    pub fn merged(&self, other: &ParamEnv) -> ParamEnv {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.values.insert(k.to_string(), v);
        }
        out
    }
}

impl fmt::Display for ParamEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}
