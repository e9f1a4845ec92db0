//! Check reports: the unit of evidence every verification routine returns.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

const HARD_FAIL: &str = "flag_failed";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub paper_ref: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub context: BTreeMap<String, Value>,
}

impl CheckReport {
    /// Residual-type check: passes iff `residual <= tolerance`.
    pub fn residual(
        check_id: impl Into<String>,
        paper_ref: impl Into<String>,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            check_id: check_id.into(),
            paper_ref: paper_ref.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            context: BTreeMap::new(),
        }
    }

    /// Expected-failure check: passes iff `residual > threshold`.
    pub fn exceeds(
        check_id: impl Into<String>,
        paper_ref: impl Into<String>,
        residual: f64,
        threshold: f64,
    ) -> Self {
        let mut report = Self::residual(check_id, paper_ref, residual, threshold);
        report.pass = residual > threshold;
        report
            .context
            .insert("pass_when".into(), Value::from("residual_above_tolerance"));
        report
    }

    /// Failing report for a check that could not run.
    pub fn errored(
        check_id: impl Into<String>,
        paper_ref: impl Into<String>,
        tolerance: f64,
        error: &dyn std::error::Error,
    ) -> Self {
        let mut report = Self::residual(check_id, paper_ref, f64::INFINITY, tolerance);
        report.pass = false;
        report
            .context
            .insert("error".into(), Value::from(error.to_string()));
        report
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.context.insert(key.to_string(), value.into());
        self
    }

    pub fn with_flag(self, flag: &str) -> Self {
        self.with(flag, true)
    }

    /// Fails the report for a reason other than its residual; `retolerance`
    /// keeps it failed.
    pub fn fail_with(self, flag: &str) -> Self {
        let mut report = self.with_flag(flag).with_flag(HARD_FAIL);
        report.pass = false;
        report
    }

    /// Re-evaluates the verdict against a different tolerance.
    pub fn retolerance(&mut self, tolerance: f64) {
        self.tolerance = tolerance;
        self.pass = !self.context.contains_key(HARD_FAIL)
            && if self.passes_above() {
                self.residual > tolerance
            } else {
                self.residual <= tolerance
            };
    }

    fn passes_above(&self) -> bool {
        self.context.get("pass_when") == Some(&Value::from("residual_above_tolerance"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Table,
}

pub fn emit_report(reports: &[CheckReport], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => emit_json(reports),
        ReportFormat::Table => emit_table(reports),
    }
}

fn emit_json(reports: &[CheckReport]) -> String {
    let rows: Vec<Value> = reports.iter().map(json_row).collect();
    let mut text = serde_json::to_string_pretty(&rows).expect("report serialization is infallible");
    if !rows.is_empty() {
        text.push('\n');
    }
    text
}

fn json_row(report: &CheckReport) -> Value {
    let mut row = serde_json::Map::new();
    row.insert("check_id".into(), Value::from(report.check_id.clone()));
    row.insert("paper_ref".into(), Value::from(report.paper_ref.clone()));
    row.insert("residual".into(), float_value(report.residual));
    row.insert("tolerance".into(), float_value(report.tolerance));
    row.insert("pass".into(), Value::from(report.pass));
    let context: serde_json::Map<String, Value> = report
        .context
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    row.insert("context".into(), Value::Object(context));
    Value::Object(row)
}

fn float_value(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x.is_nan() {
        Value::from("nan")
    } else if x > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

fn emit_table(reports: &[CheckReport]) -> String {
    let id_width = reports
        .iter()
        .map(|r| r.check_id.len())
        .max()
        .unwrap_or(0)
        .max("check".len());
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<id_width$}  {:<4}  {:>12}  {:>12}  relation",
        "check", "pass", "residual", "tolerance"
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{:<id_width$}  {:<4}  {:>12.4e}  {:>12.4e}  {}",
            r.check_id,
            if r.pass { "ok" } else { "FAIL" },
            r.residual,
            r.tolerance,
            r.paper_ref
        );
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    let _ = writeln!(out, "{passed}/{} checks passed", reports.len());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_json_is_empty_array() {
        assert_eq!(emit_report(&[], ReportFormat::Json), "[]");
    }

    #[test]
    fn single_passing_report() {
        let r = CheckReport::residual("demo", "[A,B] = AB - BA", 0.0, 1e-12).with("n_points", 256);
        let text = emit_report(std::slice::from_ref(&r), ReportFormat::Json);
        let parsed: Value = serde_json::from_str(&text).unwrap();
        let arr = parsed.as_array().unwrap();
        assert_eq!(arr.len(), 1);
        let obj = arr[0].as_object().unwrap();
        assert_eq!(obj["pass"], Value::from(true));
        let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        assert_eq!(
            keys,
            [
                "check_id",
                "paper_ref",
                "residual",
                "tolerance",
                "pass",
                "context"
            ]
        );
        assert_eq!(text, emit_report(&[r], ReportFormat::Json));
    }

    #[test]
    fn infinite_residual_serializes() {
        let err = crate::QpbError::DegenerateState("x".into());
        let r = CheckReport::errored("bad", "ref", 1e-6, &err);
        let text = emit_report(&[r], ReportFormat::Json);
        assert!(text.contains("\"inf\""));
        assert!(text.contains("\"pass\": false"));
    }

    #[test]
    fn retolerance_flips_verdict() {
        let mut r = CheckReport::residual("x", "ref", 1e-9, 1e-6);
        assert!(r.pass);
        r.retolerance(1e-15);
        assert!(!r.pass);
    }

    #[test]
    fn table_lists_every_check() {
        let rs = vec![
            CheckReport::residual("alpha", "r1", 0.0, 1.0),
            CheckReport::residual("beta", "r2", 2.0, 1.0),
        ];
        let t = emit_report(&rs, ReportFormat::Table);
        assert!(t.contains("alpha"));
        assert!(t.contains("FAIL"));
        assert!(t.ends_with("1/2 checks passed\n"));
    }
}
