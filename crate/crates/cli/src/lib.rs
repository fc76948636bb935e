//! Experiment driver for the `focusnode` toolkit.
//!
//! Every subcommand builds an [`ExperimentConfig`], runs it, and leaves CSV
//! files plus a `manifest.json` (inputs, versions, checksums, wall time)
//! in the output directory.

pub mod config;
pub mod manifest;
pub mod run;

pub use config::{Experiment, ExperimentConfig, FORMAT_VERSION};
pub use manifest::{report, run, Manifest, Report, RunOutput};

/// Environment variable that caps the worker pool.
pub const THREADS_ENV: &str = "FOCUSNODE_THREADS";

/// Size the global pool from `threads` or, failing that, [`THREADS_ENV`].
pub fn init_threads(threads: Option<usize>) -> anyhow::Result<()> {
    let n = match threads {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| anyhow::anyhow!("{THREADS_ENV} must be a positive integer, got {v:?}"))?),
            Err(_) => None,
        },
    };
    match n {
        Some(0) => anyhow::bail!("thread count must be positive"),
        #[cfg(feature = "parallel")]
        Some(n) => {
            // a second initialisation in the same process keeps the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Ok(())
        }
        _ => Ok(()),
    }
}
