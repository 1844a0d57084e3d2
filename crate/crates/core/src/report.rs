use serde::Serialize;

/// Outcome of one machine-checked invariant over a batch of cases.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub check: String,
    /// False when the invariant's preconditions do not hold (nothing is asserted).
    pub applicable: bool,
    pub checked: u64,
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    pub fn new(check: &str) -> Self {
        CheckReport {
            check: check.to_string(),
            applicable: true,
            ..Default::default()
        }
    }

    pub fn inapplicable(check: &str, why: &str) -> Self {
        CheckReport {
            check: check.to_string(),
            applicable: false,
            note: Some(why.to_string()),
            ..Default::default()
        }
    }

    /// Records one case; `failure` is `Some(detail)` on a violation.
    pub fn record(&mut self, failure: Option<String>) {
        self.checked += 1;
        if let Some(f) = failure {
            self.violations.push(f);
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Adds the counts of `other` (same check) into `self`.
    pub fn merge(&mut self, other: CheckReport) {
        self.applicable |= other.applicable;
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }
}
