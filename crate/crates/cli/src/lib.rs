//! Configuration, orchestration and report emission for the `finsler` binary.

pub mod config;
pub mod emit;
pub mod run;

use anyhow::{anyhow, Result};

pub const THREADS_ENV: &str = "FINSLER_NUM_THREADS";

/// Size the global thread pool from `FINSLER_NUM_THREADS` when set.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| anyhow!("{THREADS_ENV}: expected a positive integer, found `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| anyhow!("{THREADS_ENV}: {e}"))
}
