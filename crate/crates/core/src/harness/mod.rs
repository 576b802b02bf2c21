//! Experiment driver behind the `pdla` binary: single runs with every check
//! reported, the TCP parameter sweep, and the verification suites.

mod report;
mod run;
mod sweep;
mod verify;

use std::fmt;
use std::str::FromStr;

pub use report::{fmt_sig, ratio, CheckResult, RunReport};
pub use run::{report_bahncard, report_setcover, report_ski, report_tcp, run_from_json, SkiInput, BOUND_TOL};
pub use sweep::{
    aggregate, run_sweep, write_aggregate, write_rows, AggregateRow, SweepRow, SweepSpec, AGGREGATE_HEADER, CSV_HEADER,
    INSTANCE_STREAM, NOISE_STREAM,
};
pub use verify::{
    certificates, duals, oracles, tradeoff_grid, update_words, verify, Scope, VerifyLine, DUAL_LAMBDAS, SUITE_SIZE,
    VERIFY_SEED,
};

use crate::error::{PdlaError, Result};

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "PDLA_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    SetCover,
    Ski,
    Bahncard,
    Tcp,
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::SetCover => "setcover",
            Problem::Ski => "ski",
            Problem::Bahncard => "bahncard",
            Problem::Tcp => "tcp",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = PdlaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "setcover" | "set-cover" => Ok(Problem::SetCover),
            "ski" | "skirental" => Ok(Problem::Ski),
            "bahncard" => Ok(Problem::Bahncard),
            "tcp" | "tcpack" => Ok(Problem::Tcp),
            _ => Err(PdlaError::domain(format!(
                "unknown problem {s:?}; expected setcover, ski, bahncard or tcp"
            ))),
        }
    }
}

/// Runs `f` on a pool sized by `PDLA_THREADS`, or rayon's default when unset.
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| PdlaError::domain(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?,
        Err(_) => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| PdlaError::domain(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}
