//! Configuration, persistence, sweeps and invariant checks for the
//! `pkns-core` solvers; the `pkns` binary is a thin CLI over this crate.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod check;
pub mod checkpoint;
pub mod config;
pub mod error;
pub mod run;
pub mod sweep;

pub use checkpoint::Checkpoint;
pub use config::{parse_config, render_config, ConfigDocument};
pub use error::{ConfigError, FormatError, HarnessError};
pub use run::{execute, resume, RunOutcome, Verdict};
pub use sweep::{run_sweep, SweepPlan, SweepReport, SweepSpec};

/// Environment variable that sets the worker count when `--threads` is absent.
pub const THREADS_ENV: &str = "PKNS_THREADS";

/// Worker pool of exactly `threads` workers (at least one).
pub fn thread_pool(threads: usize) -> Result<rayon::ThreadPool, HarnessError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| ConfigError::for_key("threads", e.to_string()).into())
}

/// Default worker count: the available parallelism of the machine.
pub fn default_threads() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}
