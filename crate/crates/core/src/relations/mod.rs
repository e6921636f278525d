//! Relation catalog, exact-residual verification, the two-term addition
//! theorem, basis expansion and the auxiliary suites.

pub mod addition;
pub mod basis;
pub mod catalog;
pub mod checks;
pub mod suite;
pub mod suspects;
pub mod verify;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use addition::{
    verify_addition_corollaries,
    double_angle_derived, double_angle_printed, first_order_derived, two_term_rhs, verify_two_term_addition,
    zeroth_order_derived, AdditionOptions,
};
pub use basis::{basis_rank, express_in_basis, BasisExpansion, BasisSet};
pub use catalog::{load_catalog, RelationEntry, Section, WeightScreen};
pub use suite::{run_suite, Suite};
pub use verify::{Check, Verifier, VerifyOptions};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Indeterminate => "INDETERMINATE",
        })
    }
}

/// How a report bears on the run's exit status.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    /// Verdict matches the expectation, or nothing was expected.
    AsExpected,
    Indeterminate,
    Unexpected,
}

/// Main-weight range over which a residual was required to vanish.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReliableWindow {
    pub lo: i64,
    /// `None` when every coefficient is exact.
    pub hi: Option<i64>,
}

impl ReliableWindow {
    pub fn slack(&self) -> Option<i64> {
        self.hi.map(|h| h - self.lo)
    }
}

/// One JSON line of verification output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub id: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cleared_power: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<ReliableWindow>,
    pub residual_terms: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lowest_residual: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_screen: Option<WeightScreen>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<String>,
}

impl VerificationReport {
    pub fn new(suite: &str, id: impl Into<String>, verdict: Verdict) -> Self {
        VerificationReport {
            suite: suite.into(),
            id: id.into(),
            verdict,
            expected: None,
            relation: None,
            cleared_power: None,
            window: None,
            residual_terms: 0,
            lowest_residual: None,
            weight_screen: None,
            note: None,
            elapsed_ms: None,
            sigma: None,
        }
    }

    /// A yes/no check with no series residual.
    pub fn boolean(suite: &str, id: impl Into<String>, ok: bool, expected: Verdict) -> Self {
        let mut r = Self::new(suite, id, if ok { Verdict::Pass } else { Verdict::Fail });
        r.expected = Some(expected);
        r
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_expected(mut self, e: Option<Verdict>) -> Self {
        self.expected = e;
        self
    }

    pub fn outcome(&self) -> Outcome {
        match (self.verdict, self.expected) {
            (Verdict::Indeterminate, Some(_)) => Outcome::Indeterminate,
            (v, Some(e)) if v != e => Outcome::Unexpected,
            _ => Outcome::AsExpected,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Exit code for a batch: 0 all as expected, 1 any unexpected verdict,
/// 2 indeterminate without unexpected verdicts.
pub fn exit_code(reports: &[VerificationReport]) -> i32 {
    match reports.iter().map(VerificationReport::outcome).max() {
        Some(Outcome::Unexpected) => 1,
        Some(Outcome::Indeterminate) => 2,
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcomes_and_exit_codes() {
        let ok = VerificationReport::boolean("s", "a", true, Verdict::Pass);
        let neg = VerificationReport::boolean("s", "b", false, Verdict::Fail);
        let bad = VerificationReport::boolean("s", "c", false, Verdict::Pass);
        let mut ind = VerificationReport::new("s", "d", Verdict::Indeterminate);
        ind.expected = Some(Verdict::Pass);
        assert_eq!(exit_code(&[ok.clone(), neg.clone()]), 0);
        assert_eq!(exit_code(&[ok.clone(), ind.clone()]), 2);
        assert_eq!(exit_code(&[ind, bad]), 1);
        let free = VerificationReport::new("s", "e", Verdict::Fail);
        assert_eq!(free.outcome(), Outcome::AsExpected);
    }

    #[test]
    fn report_json_round_trip() {
        let mut r = VerificationReport::boolean("curve", "x", true, Verdict::Pass);
        r.window = Some(ReliableWindow { lo: 12, hi: Some(27) });
        let line = r.to_json_line();
        assert!(line.contains("\"verdict\":\"PASS\""));
        let back: VerificationReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back, r);
    }
}
