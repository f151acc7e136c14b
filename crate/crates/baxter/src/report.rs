//! Structured results for verification runs.
//!
//! Every verifier returns a [`CheckReport`]: a list of named per-item
//! results plus an overall status. Reports serialize to JSON with fields in
//! a fixed order and items in the order they were produced, which is
//! deterministic for a given input and seed.

use serde::{Deserialize, Serialize};

use crate::tensor::NonzeroWitness;

/// Outcome of a single named check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// The identity held exactly.
    Pass,
    /// The identity failed; a witness or detail says where.
    Fail,
    /// The item could not be evaluated (for example a sample point hit a
    /// vanishing denominator) and was replaced, never silently dropped.
    Skipped,
}

/// One named result inside a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckItem {
    /// What was checked, including any indices or point number.
    pub name: String,
    pub status: Status,
    /// Extra context: a prefactor, a sample point, a skip reason.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Location and value of a nonzero residual entry, when one was found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<NonzeroWitness>,
}

impl CheckItem {
    /// A passing item.
    pub fn pass(name: impl Into<String>) -> CheckItem {
        CheckItem { name: name.into(), status: Status::Pass, detail: None, witness: None }
    }

    /// A failing item.
    pub fn fail(name: impl Into<String>) -> CheckItem {
        CheckItem { name: name.into(), status: Status::Fail, detail: None, witness: None }
    }

    /// A skipped item with its reason.
    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> CheckItem {
        CheckItem {
            name: name.into(),
            status: Status::Skipped,
            detail: Some(reason.into()),
            witness: None,
        }
    }

    /// Attaches detail text.
    pub fn with_detail(mut self, detail: impl Into<String>) -> CheckItem {
        self.detail = Some(detail.into());
        self
    }

    /// Attaches a witness.
    pub fn with_witness(mut self, witness: NonzeroWitness) -> CheckItem {
        self.witness = Some(witness);
        self
    }
}

/// A full verification run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    /// What was verified.
    pub name: String,
    /// `"expand"` or `"sample"`.
    pub mode: String,
    /// Seed of the point stream, in sample mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<CheckItem>,
    pub status: Status,
}

impl CheckReport {
    /// Builds a report, deriving the overall status: `Fail` if any item
    /// failed, otherwise `Pass` when at least one item actually ran,
    /// otherwise `Fail` (an all-skipped run proves nothing).
    pub fn new(
        name: impl Into<String>,
        mode: impl Into<String>,
        seed: Option<u64>,
        checks: Vec<CheckItem>,
    ) -> CheckReport {
        let any_fail = checks.iter().any(|c| c.status == Status::Fail);
        let any_pass = checks.iter().any(|c| c.status == Status::Pass);
        let status = if any_fail {
            Status::Fail
        } else if any_pass {
            Status::Pass
        } else {
            Status::Fail
        };
        CheckReport { name: name.into(), mode: mode.into(), seed, checks, status }
    }

    /// True when the overall status is `Pass`.
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// The failing items.
    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    /// Merges several reports into one section-per-report summary.
    pub fn combine(name: impl Into<String>, reports: Vec<CheckReport>) -> CheckReport {
        let mode = reports
            .first()
            .map(|r| r.mode.clone())
            .unwrap_or_else(|| "expand".to_string());
        let seed = reports.iter().find_map(|r| r.seed);
        let mut checks = Vec::new();
        for r in reports {
            for mut item in r.checks {
                item.name = format!("{}: {}", r.name, item.name);
                checks.push(item);
            }
        }
        CheckReport::new(name, mode, seed, checks)
    }
}

/// Mode label for report headers.
pub fn mode_label(mode: &crate::scalar::CheckMode) -> (&'static str, Option<u64>) {
    match mode {
        crate::scalar::CheckMode::Expand => ("expand", None),
        crate::scalar::CheckMode::Sample(cfg) => ("sample", Some(cfg.seed)),
    }
}
