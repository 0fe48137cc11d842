//! Run reports: one record per check, JSON and CSV serialisation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use cliffwave::uncertainty::{UncertaintyReport, Verdict};
use serde::{Deserialize, Serialize};

use crate::scenario::Scenario;
use crate::CliError;

pub const REPORT_SCHEMA: &str = "cliffwave-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    ReportOnly,
}

impl CheckStatus {
    pub fn label(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::ReportOnly => "report_only",
        }
    }

    pub fn from_verdict(v: Verdict) -> Self {
        match v {
            Verdict::Holds => CheckStatus::Pass,
            Verdict::Violated => CheckStatus::Fail,
            Verdict::ReportOnly => CheckStatus::ReportOnly,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub stage: String,
    pub check: String,
    pub status: CheckStatus,
    pub observed: Option<f64>,
    pub threshold: Option<f64>,
    /// Named diagnostics. Non-finite values are dropped (JSON has no
    /// representation for them) and listed in `notes`.
    pub values: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    pub report: Option<UncertaintyReport>,
}

impl CheckRecord {
    pub fn new(stage: &str, check: impl Into<String>) -> Self {
        Self {
            stage: stage.into(),
            check: check.into(),
            status: CheckStatus::ReportOnly,
            observed: None,
            threshold: None,
            values: BTreeMap::new(),
            notes: Vec::new(),
            report: None,
        }
    }

    /// Passes iff `observed ≤ threshold`.
    pub fn at_most(mut self, observed: f64, threshold: f64) -> Self {
        self.status = if observed <= threshold {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        self.threshold = Some(threshold);
        self.observe(observed)
    }

    /// Passes iff `observed ≥ threshold`.
    pub fn at_least(mut self, observed: f64, threshold: f64) -> Self {
        self.status = if observed >= threshold {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        self.threshold = Some(threshold);
        self.observe(observed)
    }

    pub fn failed(mut self, note: impl Into<String>) -> Self {
        self.status = CheckStatus::Fail;
        self.notes.push(note.into());
        self
    }

    pub fn observe(mut self, observed: f64) -> Self {
        if observed.is_finite() {
            self.observed = Some(observed);
        } else {
            self.observed = None;
            self.notes.push(format!("observed = {observed}"));
            if self.threshold.is_some() {
                self.status = CheckStatus::Fail;
            }
        }
        self
    }

    pub fn value(mut self, name: &str, v: f64) -> Self {
        if v.is_finite() {
            self.values.insert(name.into(), v);
        } else {
            self.notes.push(format!("{name} = {v}"));
        }
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_report(mut self, mut report: UncertaintyReport) -> Self {
        self.status = CheckStatus::from_verdict(report.verdict);
        self.threshold = report.threshold;
        self.observed = report.ratio.filter(|r| r.is_finite());
        let dropped: Vec<String> = report
            .components
            .iter()
            .filter(|(_, v)| !v.is_finite())
            .map(|(k, v)| format!("{k} = {v}"))
            .collect();
        report.components.retain(|_, v| v.is_finite());
        report.ratio = report.ratio.filter(|r| r.is_finite());
        self.notes.extend(dropped);
        self.report = Some(report);
        self
    }

    /// `status stage.check observed=… threshold=… [notes]`
    pub fn describe(&self) -> String {
        format!("{} {}", self.status.label(), self.diagnostic())
    }

    /// The check name with observed vs threshold values.
    pub fn diagnostic(&self) -> String {
        let mut s = format!("{}.{}", self.stage, self.check);
        if let Some(o) = self.observed {
            let _ = write!(s, " observed={o:.6e}");
        }
        if let Some(t) = self.threshold {
            let _ = write!(s, " threshold={t:.6e}");
        }
        for n in &self.notes {
            let _ = write!(s, " [{n}]");
        }
        s
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub report_only: usize,
    pub failed_checks: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    /// Wall-clock seconds per stage.
    pub stages: BTreeMap<String, f64>,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub scenario: Scenario,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    pub timing: Timing,
}

/// The report without its timing block and output paths; this is what
/// must be byte-identical across runs of the same scenario.
#[derive(Serialize)]
struct Payload<'a> {
    schema: &'a str,
    scenario: Scenario,
    checks: &'a [CheckRecord],
    summary: &'a Summary,
}

impl RunReport {
    pub fn new(scenario: Scenario, checks: Vec<CheckRecord>, timing: Timing) -> Self {
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                CheckStatus::Pass => summary.passed += 1,
                CheckStatus::Fail => {
                    summary.failed += 1;
                    summary.failed_checks.push(format!("{}.{}", c.stage, c.check));
                }
                CheckStatus::ReportOnly => summary.report_only += 1,
            }
        }
        Self {
            schema: REPORT_SCHEMA.into(),
            scenario,
            checks,
            summary,
            timing,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            crate::EXIT_OK
        } else {
            crate::EXIT_ASSERTION
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn payload_json(&self) -> String {
        let scenario = Scenario {
            output: Default::default(),
            ..self.scenario.clone()
        };
        serde_json::to_string_pretty(&Payload {
            schema: &self.schema,
            scenario,
            checks: &self.checks,
            summary: &self.summary,
        })
        .expect("report serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let report: RunReport = serde_json::from_str(text).map_err(|e| CliError::Config(format!("report: {e}")))?;
        if report.schema != REPORT_SCHEMA {
            return Err(CliError::Config(format!(
                "unsupported report schema {:?}, expected {REPORT_SCHEMA:?}",
                report.schema
            )));
        }
        Ok(report)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn write_json(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| CliError::io(path, e))
    }

    /// One row per check.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| CliError::Config(format!("csv: {e}"));
        w.write_record([
            "stage",
            "check",
            "status",
            "observed",
            "threshold",
            "theorem",
            "k",
            "lhs",
            "rhs",
            "ratio",
            "values",
            "notes",
        ])
        .map_err(csv_err)?;
        let num = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for c in &self.checks {
            let r = c.report.as_ref();
            let mut values: Vec<String> = c.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
            if let Some(r) = r {
                values.extend(r.components.iter().map(|(k, v)| format!("{k}={v}")));
            }
            w.write_record([
                c.stage.clone(),
                c.check.clone(),
                c.status.label().to_string(),
                num(c.observed),
                num(c.threshold),
                r.map(|r| r.theorem.clone()).unwrap_or_default(),
                r.map(|r| r.k.to_string()).unwrap_or_default(),
                num(r.map(|r| r.lhs)),
                num(r.map(|r| r.rhs)),
                num(r.and_then(|r| r.ratio)),
                values.join(";"),
                c.notes.join(";"),
            ])
            .map_err(csv_err)?;
        }
        w.flush().map_err(|e| CliError::Config(format!("csv: {e}")))?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<(), CliError> {
        let file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    /// Human-readable records, one block per check.
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(s, "{}", c.describe());
            for (k, v) in &c.values {
                let _ = writeln!(s, "    {k} = {v}");
            }
            if let Some(r) = &c.report {
                let ratio = r.ratio.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
                let _ = writeln!(s, "    lhs = {}  rhs = {}  ratio = {}", r.lhs, r.rhs, ratio);
                for (k, v) in &r.components {
                    let _ = writeln!(s, "    {k} = {v}");
                }
            }
        }
        let _ = writeln!(
            s,
            "summary: {} passed, {} failed, {} report-only",
            self.summary.passed, self.summary.failed, self.summary.report_only
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds_and_nonfinite_values() {
        let c = CheckRecord::new("fourier", "roundtrip").at_most(1e-12, 1e-10);
        assert_eq!(c.status, CheckStatus::Pass);
        let c = CheckRecord::new("fourier", "roundtrip").at_most(1e-9, 1e-10);
        assert_eq!(c.status, CheckStatus::Fail);
        let c = CheckRecord::new("cwt_roundtrip", "isometry").at_least(f64::NAN, 0.0);
        assert_eq!(c.status, CheckStatus::Fail);
        assert!(c.observed.is_none());
        let c = CheckRecord::new("admissibility", "a_psi").value("a_psi", f64::INFINITY);
        assert!(c.values.is_empty() && c.notes[0].contains("inf"));
    }

    #[test]
    fn summary_and_round_trip() {
        let checks = vec![
            CheckRecord::new("a", "x").at_most(0.0, 1.0),
            CheckRecord::new("a", "y").at_most(2.0, 1.0),
            CheckRecord::new("a", "z")
                .value("v", 1.5)
                .value("w", 1.2881740199538847e-7),
        ];
        let r = RunReport::new(Scenario::default_for(2), checks, Timing::default());
        assert_eq!((r.summary.passed, r.summary.failed, r.summary.report_only), (1, 1, 1));
        assert_eq!(r.summary.failed_checks, vec!["a.y".to_string()]);
        assert_eq!(r.exit_code(), crate::EXIT_ASSERTION);
        let back = RunReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.payload_json(), r.payload_json());
        assert!(!r.payload_json().contains("timing"));
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 4);
    }
}
