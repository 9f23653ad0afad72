use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    PreconditionFailed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::PreconditionFailed => "precondition-failed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Residual {
    /// NaN never passes.
    pub fn passes(&self) -> bool {
        self.value <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Observation {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub config_digest: String,
    pub residuals: Vec<Residual>,
    pub verdict: Verdict,
    pub anchor: String,
    /// Diagnostic values that carry no verdict.
    pub observations: Vec<Observation>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(check: &str, anchor: &str) -> Self {
        CheckReport {
            check: check.to_string(),
            config_digest: String::new(),
            residuals: Vec::new(),
            verdict: Verdict::Pass,
            anchor: anchor.to_string(),
            observations: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_digest(mut self, digest: &str) -> Self {
        self.config_digest = digest.to_string();
        self
    }

    pub fn residual(&mut self, name: impl Into<String>, value: f64, tolerance: f64) {
        self.residuals.push(Residual { name: name.into(), value, tolerance });
        self.settle();
    }

    pub fn observe(&mut self, name: impl Into<String>, value: f64) {
        self.observations.push(Observation { name: name.into(), value: value + 0.0 });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn precondition_failed(&mut self, reason: impl Into<String>) {
        self.verdict = Verdict::PreconditionFailed;
        self.notes.push(reason.into());
    }

    fn settle(&mut self) {
        if self.verdict != Verdict::PreconditionFailed {
            self.verdict = if self.residuals.iter().all(Residual::passes) {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn get(&self, name: &str) -> Option<&Residual> {
        self.residuals.iter().find(|r| r.name == name)
    }

    pub fn observation(&self, name: &str) -> Option<f64> {
        self.observations.iter().find(|o| o.name == name).map(|o| o.value)
    }
}
