use std::path::PathBuf;

use selfless_core::norms::CertifyOptions;
use selfless_core::Budget;

use crate::args::GlobalArgs;
use crate::error::{CliError, CliResult};

/// Validated run settings shared by every command.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub group: Option<String>,
    pub budget: Budget,
    pub m_max: u64,
    pub precision_bits: u32,
    pub threads: usize,
    pub cache_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            group: None,
            budget: Budget::default(),
            m_max: 4,
            precision_bits: 64,
            threads: default_threads(),
            cache_dir: None,
        }
    }
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> CliResult<Self> {
        let cfg = RunConfig {
            group: g.group.clone(),
            budget: Budget {
                max_terms: g.budget,
                max_coeff_bits: g.max_coeff_bits,
            },
            m_max: g.m_max,
            precision_bits: g.precision_bits,
            threads: g.threads.unwrap_or_else(default_threads),
            cache_dir: g.cache_dir.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.budget.max_terms == 0 {
            return Err(CliError::Usage("--budget must be positive".into()));
        }
        if self.m_max == 0 || !self.m_max.is_power_of_two() {
            return Err(CliError::Usage(format!(
                "--m-max must be a power of two, got {}",
                self.m_max
            )));
        }
        if !(1..=4096).contains(&self.precision_bits) {
            return Err(CliError::Usage("--precision-bits must lie in 1..=4096".into()));
        }
        if self.threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        Ok(())
    }

    pub fn group_or<'a>(&'a self, fallback: &'a str) -> &'a str {
        self.group.as_deref().unwrap_or(fallback)
    }

    pub fn certify_options(&self) -> CertifyOptions {
        CertifyOptions {
            m_max: self.m_max,
            budget: self.budget,
            precision_bits: self.precision_bits,
        }
    }

    /// Settings that change results, echoed into report inputs.
    pub fn describe(&self) -> serde_json::Value {
        serde_json::json!({
            "budget": self.budget.max_terms.to_string(),
            "max_coeff_bits": self.budget.max_coeff_bits.map(|b| b.to_string()),
            "m_max": self.m_max,
            "precision_bits": self.precision_bits,
        })
    }
}
