//! Report emission: aligned text table, flat CSV and sweep curves.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use finsler_core::theorems::{CheckReport, Verdict};

pub const CSV_HEADER: [&str; 6] =
    ["check", "config_digest", "residual_name", "residual", "tolerance", "verdict"];
pub const CURVES_HEADER: [&str; 4] = ["check", "residual_name", "parameter", "value"];

fn number(v: f64) -> String {
    format!("{v:e}")
}

/// One row per residual. A row's verdict is its own pass/fail unless the
/// whole check failed its precondition.
pub fn csv_rows(reports: &[CheckReport]) -> Vec<[String; 6]> {
    let mut rows = Vec::new();
    for r in reports {
        if r.residuals.is_empty() {
            rows.push([
                r.check.clone(),
                r.config_digest.clone(),
                String::new(),
                String::new(),
                String::new(),
                r.verdict.to_string(),
            ]);
        }
        for res in &r.residuals {
            let verdict = match r.verdict {
                Verdict::PreconditionFailed => Verdict::PreconditionFailed,
                _ if res.passes() => Verdict::Pass,
                _ => Verdict::Fail,
            };
            rows.push([
                r.check.clone(),
                r.config_digest.clone(),
                res.name.clone(),
                number(res.value),
                number(res.tolerance),
                verdict.to_string(),
            ]);
        }
    }
    rows
}

pub fn csv_string(reports: &[CheckReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for row in csv_rows(reports) {
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Residual values against the swept parameter, in sweep order.
pub fn curves_string(runs: &[(f64, Vec<CheckReport>)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CURVES_HEADER)?;
    for (parameter, reports) in runs {
        for r in reports {
            for res in &r.residuals {
                w.write_record([r.check.clone(), res.name.clone(), number(*parameter), number(res.value)])?;
            }
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn table(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "{} [{}] {}", r.check, r.config_digest, r.verdict.to_string().to_uppercase());
        let _ = writeln!(out, "  {}", r.anchor);
        for res in &r.residuals {
            let mark = if res.passes() { "ok" } else { "FAIL" };
            let _ = writeln!(
                out,
                "  {:<28} {:>12.4e}  <= {:<10.2e} {mark}",
                res.name, res.value, res.tolerance
            );
        }
        for o in &r.observations {
            let _ = writeln!(out, "  . {:<26} {:>12.6e}", o.name, o.value);
        }
        for note in &r.notes {
            let _ = writeln!(out, "  note: {note}");
        }
    }
    out
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("output.dir: cannot write {}", path.display()))
}

pub fn write_reports(dir: &Path, reports: &[CheckReport]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("output.dir: cannot create {}", dir.display()))?;
    write(dir, "report.csv", &csv_string(reports)?)?;
    write(dir, "report.txt", &table(reports))?;
    write(dir, "report.json", &serde_json::to_string_pretty(reports)?)?;
    Ok(())
}

pub fn write_sweep(dir: &Path, runs: &[(f64, Vec<CheckReport>)]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("output.dir: cannot create {}", dir.display()))?;
    let all: Vec<CheckReport> = runs.iter().flat_map(|(_, r)| r.iter().cloned()).collect();
    write(dir, "report.csv", &csv_string(&all)?)?;
    write(dir, "curves.csv", &curves_string(runs)?)?;
    Ok(())
}
