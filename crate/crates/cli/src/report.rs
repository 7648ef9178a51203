use serde::Serialize;

use crate::io::SCHEMA_VERSION;

/// One property check. Passes iff `worst <= limit`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub worst: f64,
    pub limit: f64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn new(name: &str, worst: f64, limit: f64, samples: usize) -> Self {
        CheckResult { name: name.to_string(), passed: worst <= limit, worst, limit, samples, detail: None }
    }

    /// A count of violations, which must be zero.
    pub fn count(name: &str, failures: usize, samples: usize) -> Self {
        Self::new(name, failures as f64, 0.0, samples)
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub seed: u64,
    pub samples: usize,
    pub passed: bool,
    /// First failing check, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_offender: Option<String>,
    pub checks: Vec<CheckResult>,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn new(command: Vec<String>, seed: u64, samples: usize, checks: Vec<CheckResult>, wall_time_s: f64) -> Self {
        let worst_offender = checks.iter().find(|c| !c.passed).map(|c| c.name.clone());
        RunReport {
            schema_version: SCHEMA_VERSION,
            command,
            seed,
            samples,
            passed: worst_offender.is_none(),
            worst_offender,
            checks,
            wall_time_s,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}
