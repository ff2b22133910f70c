//! Run configuration: defaults, an optional TOML file, and command-line
//! overrides.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{GeometryConfig, DEFAULT_TOLERANCE};
use crate::ideal::CANONICAL_FORM_CAP;

/// Environment variable naming a TOML file with default settings.
pub const CONFIG_ENV: &str = "PIERCED_CONFIG";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub tolerance: f64,
    /// Monte Carlo samples per verification.
    pub samples: usize,
    /// Largest neuron count accepted by the canonical-form computation.
    pub max_neurons: usize,
    /// Samples tried by the rejection fallback when placing witnesses.
    pub fallback_samples: usize,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            tolerance: DEFAULT_TOLERANCE,
            samples: 100_000,
            max_neurons: CANONICAL_FORM_CAP,
            fallback_samples: 100_000,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse { line: e.span().map_or(0, |s| line_of(text, s.start)), msg: e.message().to_string() })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Defaults, or the file named by [`CONFIG_ENV`] when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    pub fn geometry(&self) -> GeometryConfig {
        GeometryConfig { tolerance: self.tolerance, seed: self.seed, fallback_samples: self.fallback_samples, ..GeometryConfig::default() }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].lines().count().max(1)
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "seed={} tolerance={:e} samples={} max_neurons={} fallback_samples={}",
            self.seed, self.tolerance, self.samples, self.max_neurons, self.fallback_samples
        )?;
        if let Some(o) = &self.output {
            write!(f, " output={}", o.display())?;
        }
        Ok(())
    }
}
