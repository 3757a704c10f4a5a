//! Verification rows and their CSV and JSON renderings.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "claim_id,lhs,rhs,abs_diff,tolerance,passed,lhs_err,rhs_err,wall_time_ms";

/// Why a row could not be computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowFailure {
    NonConvergence,
    Numerical,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationRow {
    pub claim_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub lhs_err: f64,
    pub rhs_err: f64,
    pub wall_time_ms: u64,
    /// Shown in the report but never affects the exit status.
    pub informational: bool,
    /// The parameter is one of the family's degenerate members.
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<RowFailure>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl VerificationRow {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        claim_id: impl Into<String>,
        lhs: f64,
        rhs: f64,
        lhs_err: f64,
        rhs_err: f64,
        tolerance: f64,
        wall_time_ms: u64,
    ) -> Self {
        let mut row = VerificationRow {
            claim_id: claim_id.into(),
            lhs,
            rhs,
            abs_diff: (lhs - rhs).abs(),
            tolerance,
            passed: false,
            lhs_err,
            rhs_err,
            wall_time_ms,
            informational: false,
            degenerate: false,
            failure: None,
            note: String::new(),
        };
        row.passed = row.recompute_passed();
        row
    }

    /// A row whose computation failed; it never passes.
    pub fn failed(claim_id: impl Into<String>, tolerance: f64, err: &Error, wall_time_ms: u64) -> Self {
        let failure = match err {
            Error::NonConvergence { .. } => RowFailure::NonConvergence,
            _ => RowFailure::Numerical,
        };
        VerificationRow {
            claim_id: claim_id.into(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            abs_diff: f64::NAN,
            tolerance,
            passed: false,
            lhs_err: f64::NAN,
            rhs_err: f64::NAN,
            wall_time_ms,
            informational: false,
            degenerate: false,
            failure: Some(failure),
            note: err.to_string(),
        }
    }

    /// `abs_diff ≤ max(tolerance, 3·(lhs_err + rhs_err))`, from the stored
    /// fields alone.
    pub fn recompute_passed(&self) -> bool {
        if self.failure.is_some() {
            return false;
        }
        let slack = 3.0 * (self.lhs_err + self.rhs_err);
        self.abs_diff <= self.tolerance.max(slack)
    }

    pub fn counts_toward_status(&self) -> bool {
        !self.informational
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn to_csv(rows: &[VerificationRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            csv_field(&r.claim_id),
            r.lhs,
            r.rhs,
            r.abs_diff,
            r.tolerance,
            r.passed,
            r.lhs_err,
            r.rhs_err,
            r.wall_time_ms
        );
    }
    out
}

/// JSON array of row objects. Non-finite numbers become `null`.
pub fn to_json(rows: &[VerificationRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Config(format!("writing {}: {e}", path.display())))
}

pub fn write_csv(rows: &[VerificationRow], path: &Path) -> Result<()> {
    write_file(path, &to_csv(rows))
}

pub fn write_json(rows: &[VerificationRow], path: &Path) -> Result<()> {
    write_file(path, &to_json(rows))
}

/// One line per row for terminal output.
pub fn summary_line(r: &VerificationRow) -> String {
    let status = match (r.passed, r.informational) {
        (true, false) => "PASS",
        (false, false) => "FAIL",
        (true, true) => "info:match",
        (false, true) => "info:mismatch",
    };
    let mut line = format!(
        "{status:<13} {:<36} lhs={:<22} rhs={:<22} diff={:.3e} tol={:.1e}",
        r.claim_id, r.lhs, r.rhs, r.abs_diff, r.tolerance
    );
    if r.degenerate {
        line.push_str(" [degenerate]");
    }
    if !r.note.is_empty() {
        line.push_str(" # ");
        line.push_str(&r.note);
    }
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rule_uses_error_estimates() {
        let r = VerificationRow::new("a", 1.0, 1.0 + 2e-6, 0.0, 0.0, 1e-6, 0);
        assert!(!r.passed);
        let r = VerificationRow::new("a", 1.0, 1.0 + 2e-6, 5e-7, 5e-7, 1e-6, 0);
        assert!(r.passed);
        assert_eq!(r.passed, r.recompute_passed());
    }

    #[test]
    fn failed_rows_never_pass() {
        let e = Error::non_convergence("x", "y");
        let r = VerificationRow::failed("b", 1.0, &e, 3);
        assert!(!r.passed && !r.recompute_passed());
        assert_eq!(r.failure, Some(RowFailure::NonConvergence));
    }

    #[test]
    fn csv_layout() {
        let rows = vec![VerificationRow::new("thm1:k=2", 0.5, 0.5, 1e-12, 1e-12, 1e-6, 7)];
        let csv = to_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        assert_eq!(lines.next().unwrap(), "thm1:k=2,0.5,0.5,0,0.000001,true,0.000000000001,0.000000000001,7");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
    }

    #[test]
    fn json_round_trip_fields() {
        let rows = vec![VerificationRow::new("x", 1.0, 2.0, 0.0, 0.0, 1e-6, 1)];
        let v: serde_json::Value = serde_json::from_str(&to_json(&rows)).unwrap();
        let obj = &v[0];
        for key in CSV_HEADER.split(',') {
            assert!(obj.get(key).is_some(), "{key}");
        }
        assert_eq!(obj["passed"], false);
    }
}
