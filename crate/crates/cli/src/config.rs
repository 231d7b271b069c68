//! Run settings: global flags merged over an optional JSON config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Contents of a `--config` file.
///
/// `params` supplies defaults for subcommand flags, keyed by the long flag
/// name with dashes replaced by underscores.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = crate::io::read_text(path)?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::in_file(path, embedlab_core::Error::from_json(e)))
    }
}

/// Effective settings for one invocation.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    seed: Option<u64>,
    pub out: PathBuf,
    tol: Option<f64>,
    params: BTreeMap<String, Value>,
}

impl Settings {
    pub fn resolve(
        seed: Option<u64>,
        out: Option<PathBuf>,
        tol: Option<f64>,
        config: Option<RunConfig>,
    ) -> CliResult<Self> {
        let (config_seed, config_tol, config_out, params) = match config {
            Some(c) => (Some(c.seed), c.tol, c.out, c.params),
            None => (None, None, None, BTreeMap::new()),
        };
        let tol = tol.or(config_tol);
        if let Some(t) = tol {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(CliError::Usage(format!(
                    "tolerance must be a nonnegative number, got {t}"
                )));
            }
        }
        Ok(Self {
            seed: seed.or(config_seed),
            out: out.or(config_out).unwrap_or_else(|| PathBuf::from(".")),
            tol,
            params,
        })
    }

    /// The run seed; commands that draw random numbers refuse to run without one.
    pub fn seed(&self) -> CliResult<u64> {
        self.seed.ok_or_else(|| {
            CliError::Usage(
                "this command is randomized; pass --seed or a config with \"seed\"".into(),
            )
        })
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    /// Reject config parameters this subcommand does not understand.
    pub fn check_params(&self, known: &[&str]) -> CliResult<()> {
        match self.params.keys().find(|k| !known.contains(&k.as_str())) {
            Some(k) => Err(CliError::Usage(format!(
                "config parameter \"{k}\" is not used by this subcommand (known: {})",
                known.join(", ")
            ))),
            None => Ok(()),
        }
    }

    /// A flag value, else the config default, else `None`.
    pub fn param<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.params.get(key) {
            None => Ok(None),
            Some(v) => serde_json::from_value(v.clone())
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config parameter \"{key}\": {e}"))),
        }
    }

    pub fn param_or<T: DeserializeOwned>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> CliResult<T> {
        Ok(self.param(flag, key)?.unwrap_or(default))
    }

    pub fn require<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> CliResult<T> {
        self.param(flag, key)?
            .ok_or_else(|| CliError::Usage(format!("missing --{}", key.replace('_', "-"))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(json: &str) -> RunConfig {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn seed_is_required_in_config() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"tol": 1e-6}"#).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"seed": 1, "colour": 2}"#).is_err());
    }

    #[test]
    fn flags_override_config() {
        let cfg = config(r#"{"seed": 5, "tol": 1e-3, "params": {"k": 4}}"#);
        let s = Settings::resolve(Some(9), None, None, Some(cfg)).unwrap();
        assert_eq!(s.seed().unwrap(), 9);
        assert_eq!(s.tol_or(0.0), 1e-3);
        assert_eq!(s.param_or(None, "k", 3usize).unwrap(), 4);
        assert_eq!(s.param_or(Some(6usize), "k", 3).unwrap(), 6);
        assert!(s.check_params(&["k"]).is_ok());
        assert!(s.check_params(&["eps"]).is_err());
    }

    #[test]
    fn no_seed_without_flag_or_config() {
        let s = Settings::resolve(None, None, None, None).unwrap();
        assert!(s.seed().is_err());
        let s = Settings::resolve(None, None, None, Some(config(r#"{"seed": 0}"#))).unwrap();
        assert_eq!(s.seed().unwrap(), 0);
    }
}
