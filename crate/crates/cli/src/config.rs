//! Run configuration: defaults, an optional JSON file, then command-line flags.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Seed used by every randomized suite unless overridden.
pub const DEFAULT_SEED: u64 = 20240611;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Dimension of the formal disk.
    pub d: usize,
    /// Truncation cap of the power series.
    pub cap: i32,
    /// Number of η generators.
    pub s: usize,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    /// Random instances per randomized check.
    pub instances: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            d: 3,
            cap: 6,
            s: 2,
            samples: 1_000_000,
            seed: DEFAULT_SEED,
            workers: 1,
            instances: 200,
        }
    }
}

/// Overrides given on the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub workers: Option<usize>,
    pub d: Option<usize>,
    pub s: Option<usize>,
    pub cap: Option<i32>,
    pub instances: Option<usize>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, o: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = o.seed {
            cfg.seed = v;
        }
        if let Some(v) = o.samples {
            cfg.samples = v;
        }
        if let Some(v) = o.workers {
            cfg.workers = v;
        }
        if let Some(v) = o.d {
            cfg.d = v;
        }
        if let Some(v) = o.s {
            cfg.s = v;
        }
        if let Some(v) = o.cap {
            cfg.cap = v;
        }
        if let Some(v) = o.instances {
            cfg.instances = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |what: &str| Err(CliError::Usage(format!("{what} must be positive")));
        if self.d == 0 || self.d > 3 {
            return Err(CliError::Usage("d must be between 1 and 3".into()));
        }
        if self.cap <= 0 {
            return bad("cap");
        }
        if self.s == 0 {
            return bad("s");
        }
        if self.samples < 2 {
            return Err(CliError::Usage("samples must be at least 2".into()));
        }
        if self.workers == 0 {
            return bad("workers");
        }
        if self.instances == 0 {
            return bad("instances");
        }
        Ok(())
    }

    pub fn monte_carlo(&self) -> hkr_core::weight::MonteCarloConfig {
        hkr_core::weight::MonteCarloConfig {
            samples: self.samples,
            seed: self.seed,
            workers: self.workers,
        }
    }
}
