//! Serializable verification records shared by every check.

use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub item: String,
    pub detail: String,
}

/// Outcome of an identity check over a finite window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub check: String,
    pub passed: bool,
    /// Number of individual identities evaluated.
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>) -> Self {
        VerificationReport {
            schema: SCHEMA,
            check: check.into(),
            passed: true,
            checked: 0,
            violations: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn violation(&mut self, item: impl Into<String>, detail: impl Into<String>) {
        self.passed = false;
        self.violations.push(Violation {
            item: item.into(),
            detail: detail.into(),
        });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Builds a report from per-item outcomes, already in deterministic order.
    pub fn from_outcomes(
        check: impl Into<String>,
        outcomes: impl IntoIterator<Item = (String, Option<String>)>,
    ) -> Self {
        let mut report = VerificationReport::new(check);
        for (item, failure) in outcomes {
            report.checked += 1;
            if let Some(detail) = failure {
                report.violation(item, detail);
            }
        }
        report
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checked += other.checked;
        self.passed &= other.passed;
        self.violations.extend(other.violations);
        self.notes.extend(other.notes);
    }

    pub fn to_json(&self) -> Value {
        sorted(serde_json::to_value(self).expect("report serializes"))
    }
}

/// Result of a span probe; always evidence about a truncation, never a proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReachReport {
    pub schema: &'static str,
    pub kind: &'static str,
    pub seed: String,
    pub window: [usize; 3],
    pub rank: usize,
    pub ambient: usize,
    pub full: bool,
    pub missing: Vec<String>,
    pub specialization: String,
    /// Count of generator applications that produced terms outside the window.
    pub projected: usize,
    pub cross_check: Option<CrossCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub specialization: String,
    pub rank: usize,
}

impl ReachReport {
    pub fn to_json(&self) -> Value {
        sorted(serde_json::to_value(self).expect("report serializes"))
    }
}

/// serde_json's default map is ordered, so round-tripping sorts keys.
pub fn sorted(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut out = serde_json::Map::new();
            let mut entries: Vec<_> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            for (k, v) in entries {
                out.insert(k, sorted(v));
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sorted).collect()),
        other => other,
    }
}

pub fn error_json(message: &str) -> Value {
    json!({ "schema": SCHEMA, "error": message })
}
