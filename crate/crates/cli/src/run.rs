//! Check orchestration. Runs are sequential; parallelism lives inside checks.

use anyhow::{anyhow, Result};
use serde_json::Value;

use finsler_core::theorems::{CheckKind, CheckReport, Verdict};
use finsler_core::GeomError;

use crate::config::{resolve, set_key, Resolved};

/// Command-line overrides applied to the config before resolution.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub grid_order: Option<usize>,
    pub tol_scale: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, value: &mut Value) -> Result<()> {
        if let Some(order) = self.grid_order {
            set_key(value, "grid_order", order as f64)?;
        }
        if let Some(scale) = self.tol_scale {
            set_key(value, "tolerances.scale", scale)?;
        }
        Ok(())
    }
}

/// The config key most likely at fault for a failed check.
fn key_for(err: &GeomError, index: usize) -> String {
    match err {
        GeomError::WindTooStrong { .. } | GeomError::Precondition(_) => "wind".into(),
        GeomError::Unsupported(_)
        | GeomError::ChartDegeneracy(_)
        | GeomError::StepTooLarge(_)
        | GeomError::Orientation(_) => "embedding".into(),
        GeomError::InvalidNorm(_) | GeomError::InvalidSpec(_) | GeomError::NotPositiveDefinite => {
            "metric".into()
        }
        _ => format!("checks[{index}]"),
    }
}

pub fn run_resolved(resolved: &Resolved) -> Result<Vec<CheckReport>> {
    resolved
        .checks
        .iter()
        .enumerate()
        .map(|(i, kind)| run_one(resolved, i, *kind))
        .collect()
}

fn run_one(resolved: &Resolved, index: usize, kind: CheckKind) -> Result<CheckReport> {
    kind.run(&resolved.scenario)
        .map(|r| r.with_digest(&resolved.digest))
        .map_err(|e| anyhow!("{}: {e} (while running {})", key_for(&e, index), kind.name()))
}

pub fn run_value(mut value: Value, overrides: Overrides) -> Result<(Resolved, Vec<CheckReport>)> {
    overrides.apply(&mut value)?;
    let resolved = resolve(value)?;
    let reports = run_resolved(&resolved)?;
    Ok((resolved, reports))
}

/// 0 if every check passes, 1 if any fails, 2 if a precondition failed.
pub fn exit_code(reports: &[CheckReport]) -> u8 {
    if reports.iter().any(|r| r.verdict == Verdict::PreconditionFailed) {
        2
    } else if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        1
    } else {
        0
    }
}
