//! Check results and the JSON report envelope.
//!
//! Reports are deterministic for a fixed (config, seed): serde emits struct
//! fields in declaration order, and timing fields stay at zero unless the
//! caller explicitly opts into wall-clock numbers.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Finding,
}

/// One verified claim: expected vs. actual, with a witness on fail/finding.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    pub witness: Option<String>,
    pub millis: u64,
}

impl CheckResult {
    pub fn pass(id: &str, expected: impl ToString, actual: impl ToString) -> Self {
        Self {
            id: id.to_string(),
            status: Status::Pass,
            expected: expected.to_string(),
            actual: actual.to_string(),
            witness: None,
            millis: 0,
        }
    }

    pub fn fail(
        id: &str,
        expected: impl ToString,
        actual: impl ToString,
        witness: impl ToString,
    ) -> Self {
        Self {
            id: id.to_string(),
            status: Status::Fail,
            expected: expected.to_string(),
            actual: actual.to_string(),
            witness: Some(witness.to_string()),
            millis: 0,
        }
    }

    pub fn finding(
        id: &str,
        expected: impl ToString,
        actual: impl ToString,
        witness: impl ToString,
    ) -> Self {
        Self {
            id: id.to_string(),
            status: Status::Finding,
            expected: expected.to_string(),
            actual: actual.to_string(),
            witness: Some(witness.to_string()),
            millis: 0,
        }
    }

    pub fn skip(id: &str, expected: impl ToString, note: impl ToString) -> Self {
        Self {
            id: id.to_string(),
            status: Status::Skip,
            expected: expected.to_string(),
            actual: note.to_string(),
            witness: None,
            millis: 0,
        }
    }

    /// Pass/fail from a boolean with a witness used only on failure.
    pub fn expect(
        id: &str,
        ok: bool,
        expected: impl ToString,
        actual: impl ToString,
        witness: impl ToString,
    ) -> Self {
        if ok {
            Self::pass(id, expected, actual)
        } else {
            Self::fail(id, expected, actual, witness)
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
    pub finding: usize,
}

/// Top-level JSON document; field order is the wire order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub p: u32,
    pub model: String,
    pub suite: String,
    pub seed: u64,
    pub version: String,
    pub cache_hits: usize,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
    pub total_millis: u64,
}

impl Report {
    pub fn new(p: u32, model: &str, suite: &str, seed: u64, checks: Vec<CheckResult>) -> Self {
        let summary = Summary {
            pass: checks.iter().filter(|c| c.status == Status::Pass).count(),
            fail: checks.iter().filter(|c| c.status == Status::Fail).count(),
            skip: checks.iter().filter(|c| c.status == Status::Skip).count(),
            finding: checks
                .iter()
                .filter(|c| c.status == Status::Finding)
                .count(),
        };
        Self {
            p,
            model: model.to_string(),
            suite: suite.to_string(),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            cache_hits: 0,
            checks,
            summary,
            total_millis: 0,
        }
    }

    pub fn any_fail(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_invariant() {
        let f = CheckResult::fail("x", "1", "2", "g=3");
        assert!(f.witness.is_some());
        let p = CheckResult::pass("x", "1", "1");
        assert!(p.witness.is_none());
    }

    #[test]
    fn json_key_order_stable() {
        let r = Report::new(5, "poly", "structure", 0, vec![CheckResult::pass("a", "1", "1")]);
        let s = r.to_json();
        let order: Vec<usize> = ["\"p\"", "\"model\"", "\"suite\"", "\"seed\"", "\"checks\"", "\"summary\""]
            .iter()
            .map(|k| s.find(k).unwrap())
            .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
    }
}
