//! Verification reports: titled lists of labelled pass/fail/info rows.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of the JSON layout produced by [`Report::to_json`].
pub const REPORT_SCHEMA: &str = "homcalc.report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub label: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub seed: Option<u64>,
    /// One-line answer printed before the rows, when the report has one.
    pub summary: Option<String>,
    pub rows: Vec<Row>,
}

#[derive(Serialize)]
struct Document<'a> {
    schema: &'static str,
    title: &'a str,
    seed: Option<u64>,
    passed: bool,
    summary: Option<&'a str>,
    rows: &'a [Row],
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            seed: None,
            summary: None,
            rows: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_summary(mut self, summary: impl Into<String>) -> Self {
        self.summary = Some(summary.into());
        self
    }

    pub fn push(&mut self, label: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.rows.push(Row {
            label: label.into(),
            status,
            detail: detail.into(),
        });
    }

    pub fn info(&mut self, label: impl Into<String>, detail: impl Into<String>) {
        self.push(label, Status::Info, detail);
    }

    pub fn check(&mut self, label: impl Into<String>, ok: bool, detail: impl Into<String>) -> bool {
        self.push(label, Status::from_bool(ok), detail);
        ok
    }

    /// Appends the rows of `other`, prefixing each label with `prefix`.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for r in other.rows {
            let label = if prefix.is_empty() {
                r.label
            } else {
                format!("{prefix}: {}", r.label)
            };
            self.rows.push(Row { label, ..r });
        }
    }

    /// True iff no row failed.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }

    pub fn to_json(&self) -> String {
        let doc = Document {
            schema: REPORT_SCHEMA,
            title: &self.title,
            seed: self.seed,
            passed: self.passed(),
            summary: self.summary.as_deref(),
            rows: &self.rows,
        };
        serde_json::to_string_pretty(&doc).expect("reports serialize")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = &self.summary {
            writeln!(f, "{s}")?;
        }
        writeln!(f, "# {}", self.title)?;
        if let Some(seed) = self.seed {
            writeln!(f, "# seed {seed}")?;
        }
        for r in &self.rows {
            if r.detail.is_empty() {
                writeln!(f, "[{}] {}", r.status, r.label)?;
            } else {
                writeln!(f, "[{}] {}: {}", r.status, r.label, r.detail)?;
            }
        }
        write!(
            f,
            "# {} pass, {} fail, {} info",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Info)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_fail_and_json() {
        let mut r = Report::new("t").with_seed(7);
        r.check("a", true, "");
        r.info("b", "note");
        assert!(r.passed());
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], REPORT_SCHEMA);
        assert_eq!(v["seed"], 7);
        assert_eq!(v["rows"][1]["status"], "info");
        r.check("c", false, "bad");
        assert!(!r.passed());
        assert!(r.to_string().contains("[FAIL] c: bad"));
    }
}
