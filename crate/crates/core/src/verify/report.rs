use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
    /// Counterexample data, present on every failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    pub millis: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<Check>,
}

/// What a single check produces before timing is attached.
pub(crate) struct Outcome {
    pub status: Status,
    pub detail: String,
    pub witness: Option<serde_json::Value>,
}

impl Outcome {
    pub fn pass(detail: impl Into<String>) -> Outcome {
        Outcome { status: Status::Pass, detail: detail.into(), witness: None }
    }

    pub fn fail(detail: impl Into<String>, witness: serde_json::Value) -> Outcome {
        Outcome { status: Status::Fail, detail: detail.into(), witness: Some(witness) }
    }

    pub fn skipped(detail: impl Into<String>) -> Outcome {
        Outcome { status: Status::Skipped, detail: detail.into(), witness: None }
    }
}

pub(crate) fn timed(name: &str, f: impl FnOnce() -> Outcome) -> Check {
    let start = Instant::now();
    finish(name, start, f())
}

/// Packs an outcome computed since `start`.
pub(crate) fn finish(name: &str, start: Instant, o: Outcome) -> Check {
    Check {
        name: name.to_string(),
        status: o.status,
        detail: o.detail,
        witness: o.witness,
        millis: start.elapsed().as_secs_f64() * 1e3,
    }
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> VerificationReport {
        VerificationReport { subject: subject.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }

    /// Adds the checks of `other`, keeping the list ordered by name.
    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// No check failed. Skipped checks do not count against the report.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("verification of {}\n", self.subject);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            let _ = writeln!(out, "  [{tag}] {} ({:.1} ms): {}", c.name, c.millis, c.detail);
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "         witness: {w}");
            }
        }
        let _ = writeln!(out, "{}", if self.passed() { "all checks passed" } else { "some checks failed" });
        out
    }
}
