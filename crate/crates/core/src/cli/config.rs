//! Run configuration: a `key = value` file, overridden by command-line
//! flags, overridden by `ONCONET_<KEY>` environment variables.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use crate::clock::Clock;
use crate::extraction::DEFAULT_THETA_LINK;
use crate::llm_refresh::Policy;

use super::CliError;

/// Keys accepted in the configuration file.
pub const KEYS: [&str; 14] = [
    "seed",
    "corpus",
    "aliases",
    "rules",
    "kg",
    "extractor",
    "theta_link",
    "latency_budget_ms",
    "policy",
    "fixed_time",
    "llm_endpoint",
    "llm_model",
    "llm_credential_env",
    "concurrency",
];

/// Environment variable that overrides `key`.
pub fn env_var(key: &str) -> String {
    format!("ONCONET_{}", key.to_ascii_uppercase())
}

/// Parses `key = value` lines; `#` starts a comment line.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(CliError::Usage(format!("config line {}: unknown key {key:?}", i + 1)));
        }
        out.insert(key.to_owned(), value.trim().trim_matches('"').to_owned());
    }
    Ok(out)
}

/// Which recogniser feeds the extraction pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtractorChoice {
    Builtin,
    Subprocess(String),
    Http(String),
}

impl FromStr for ExtractorChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "builtin" {
            Ok(ExtractorChoice::Builtin)
        } else if let Some(cmd) = s.strip_prefix("subprocess:").filter(|c| !c.trim().is_empty()) {
            Ok(ExtractorChoice::Subprocess(cmd.to_owned()))
        } else if let Some(url) = s.strip_prefix("http:").filter(|u| !u.is_empty()) {
            Ok(ExtractorChoice::Http(url.to_owned()))
        } else {
            Err(format!("extractor must be builtin, subprocess:<cmd> or http:<url>, got {s:?}"))
        }
    }
}

/// Resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    /// Layers file values, then flags, then environment overrides.
    pub fn resolve(
        file: BTreeMap<String, String>,
        flags: BTreeMap<String, String>,
        env: &dyn Fn(&str) -> Option<String>,
    ) -> Self {
        let mut values = file;
        values.extend(flags);
        for key in KEYS {
            if let Some(v) = env(&env_var(key)) {
                values.insert(key.to_owned(), v);
            }
        }
        RunConfig { values }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parsed<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|e| CliError::Usage(format!("{key}: {e}"))),
        }
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.get(key).map(PathBuf::from)
    }

    /// A path the command cannot run without; it must exist.
    pub fn existing_path(&self, key: &str) -> Result<PathBuf, CliError> {
        let p = self
            .path(key)
            .ok_or_else(|| CliError::Usage(format!("missing --{} (or {key} in the config file)", key.replace('_', "-"))))?;
        if !p.exists() {
            return Err(CliError::Data(format!("{}: no such file or directory", p.display())));
        }
        Ok(p)
    }

    pub fn kg_path(&self) -> Result<PathBuf, CliError> {
        self.path("kg")
            .ok_or_else(|| CliError::Usage("missing --kg (or kg in the config file)".into()))
    }

    pub fn theta_link(&self) -> Result<f64, CliError> {
        let theta: f64 = self.parsed("theta_link", DEFAULT_THETA_LINK)?;
        if !(0.0..=1.0).contains(&theta) {
            return Err(CliError::Usage(format!("theta_link {theta} outside [0, 1]")));
        }
        Ok(theta)
    }

    pub fn latency_budget(&self) -> Result<Duration, CliError> {
        let ms: f64 = self.parsed("latency_budget_ms", 50.0)?;
        if !ms.is_finite() || ms <= 0.0 {
            return Err(CliError::Usage(format!("latency_budget_ms must be positive, got {ms}")));
        }
        Ok(Duration::from_secs_f64(ms / 1000.0))
    }

    pub fn policy(&self) -> Result<Policy, CliError> {
        self.parsed("policy", Policy::AcceptNew)
    }

    pub fn extractor(&self) -> Result<ExtractorChoice, CliError> {
        self.parsed("extractor", ExtractorChoice::Builtin)
    }

    pub fn concurrency(&self) -> Result<usize, CliError> {
        self.parsed("concurrency", 4usize).map(|c| c.max(1))
    }

    pub fn clock(&self) -> Result<Clock, CliError> {
        match self.get("fixed_time") {
            None => Ok(Clock::System),
            Some(t) => Clock::fixed(t).map_err(|e| CliError::Usage(format!("fixed_time {t:?}: {e}"))),
        }
    }
}
