//! Run configuration shared by the drivers and the command line.

use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::enumerate::DEFAULT_LIMIT_N;
use crate::matching::TieRule;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Table,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "table" => Ok(OutputFormat::Table),
            _ => Err(Error::Malformed(format!("unknown output format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    /// Largest `n` enumerated without `long_run`.
    pub limit_n: usize,
    /// Largest variable count handed to brute-force max-sat oracles.
    pub max_vars: usize,
    pub time_budget: Option<Duration>,
    pub tie_rule: TieRule,
    pub format: OutputFormat,
    pub jobs: usize,
    pub long_run: bool,
    /// Count graphs without edges (ratio taken as 1) in table minima.
    pub include_zero_opt: bool,
    /// Shard results are appended here and skipped on resume.
    pub checkpoint: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            limit_n: DEFAULT_LIMIT_N,
            max_vars: 20,
            time_budget: None,
            tie_rule: TieRule::Low,
            format: OutputFormat::Table,
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            long_run: false,
            include_zero_opt: false,
            checkpoint: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.limit_n == 0 || self.max_vars == 0 || self.jobs == 0 {
            return Err(Error::Malformed("limits and job count must be positive".into()));
        }
        if self.time_budget.is_some_and(|d| d.is_zero()) {
            return Err(Error::Malformed("time budget must be positive".into()));
        }
        Ok(())
    }

    /// Runs `f` on a pool with `jobs` workers.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?;
        Ok(pool.install(f))
    }
}
