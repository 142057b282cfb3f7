//! Reports: a versioned, deterministic structured form and a text rendering.

use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use wcolim_core::chain::GradedAbelianGroup;
use wcolim_core::simplicial::{Stability, TruncationCertificate, TruncationMode};

/// Bumped whenever the structured layout changes incompatibly.
pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub scenario: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub caveats: Vec<String>,
    pub tasks: Vec<TaskReport>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskReport {
    pub index: usize,
    pub command: String,
    pub subject: String,
    pub status: Status,
    /// Outcome of the task's check before `expect_failure` is applied.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<bool>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub expect_failure: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<Table>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub caveats: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub mode: String,
    pub truncation: usize,
    pub window: [i32; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_min_degree: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stability: Option<String>,
}

impl From<&TruncationCertificate> for CertificateReport {
    fn from(c: &TruncationCertificate) -> Self {
        CertificateReport {
            mode: match c.mode {
                TruncationMode::Sound => "sound",
                TruncationMode::Heuristic => "heuristic",
            }
            .into(),
            truncation: c.truncation,
            window: [c.window.0, c.window.1],
            tail_min_degree: c.tail_min_degree,
            stability: c.stability.map(stability_name),
        }
    }
}

pub fn stability_name(s: Stability) -> String {
    match s {
        Stability::Stable => "stable",
        Stability::Unstable => "unstable",
    }
    .into()
}

impl Table {
    pub fn new(title: impl Into<String>, header: &[&str]) -> Self {
        Table { title: title.into(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(mut self, cells: Vec<String>) -> Self {
        self.rows.push(cells);
        self
    }

    /// One row per degree: `n | H_n`.
    pub fn homology(title: impl Into<String>, h: &GradedAbelianGroup) -> Self {
        let mut t = Table::new(title, &["n", "H_n"]);
        for (n, g) in &h.groups {
            t.rows.push(vec![n.to_string(), g.to_string()]);
        }
        t
    }

    /// Columns of graded groups side by side on the union of their degrees.
    pub fn homology_columns(title: impl Into<String>, columns: &[(&str, &GradedAbelianGroup)]) -> Self {
        let mut header = vec!["n"];
        header.extend(columns.iter().map(|c| c.0));
        let mut t = Table::new(title, &header);
        let degrees: std::collections::BTreeSet<i32> =
            columns.iter().flat_map(|c| c.1.groups.keys().copied()).collect();
        for n in degrees {
            let mut row = vec![n.to_string()];
            row.extend(columns.iter().map(|c| c.1.get(n).to_string()));
            t.rows.push(row);
        }
        t
    }
}

impl TaskReport {
    pub fn new(command: &str, subject: impl Into<String>) -> Self {
        TaskReport {
            index: 0,
            command: command.into(),
            subject: subject.into(),
            status: Status::Pass,
            check: None,
            expect_failure: false,
            tables: Vec::new(),
            certificate: None,
            caveats: Vec::new(),
        }
    }

    pub fn with_check(mut self, ok: bool) -> Self {
        self.check = Some(ok);
        self
    }

    pub fn table(mut self, t: Table) -> Self {
        self.tables.push(t);
        self
    }

    pub fn caveat(mut self, c: impl Into<String>) -> Self {
        self.caveats.push(c.into());
        self
    }

    /// Applies `expect_failure` to the raw check.
    pub fn settle(mut self, index: usize, expect_failure: bool) -> Self {
        self.index = index;
        self.expect_failure = expect_failure;
        let ok = self.check.unwrap_or(true);
        self.status = if ok != expect_failure { Status::Pass } else { Status::Fail };
        self
    }
}

impl Report {
    pub fn new(scenario: impl Into<String>, caveats: Vec<String>, tasks: Vec<TaskReport>) -> Self {
        let passed = tasks.iter().all(|t| t.status == Status::Pass);
        Report { version: REPORT_VERSION, scenario: scenario.into(), passed, caveats, tasks }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn render_table(out: &mut String, t: &Table) {
    let cols = t.header.len();
    let width: Vec<usize> = (0..cols)
        .map(|j| {
            let body = t.rows.iter().filter_map(|r| r.get(j)).map(|c| c.chars().count());
            body.chain([t.header[j].chars().count()]).max().unwrap_or(0)
        })
        .collect();
    let line = |cells: &[String]| {
        let padded: Vec<String> =
            cells.iter().enumerate().map(|(j, c)| format!("{c:<w$}", w = width.get(j).copied().unwrap_or(0))).collect();
        format!("      {}", padded.join("  ").trim_end())
    };
    let _ = writeln!(out, "    {}", t.title);
    let _ = writeln!(out, "{}", line(&t.header));
    for r in &t.rows {
        let _ = writeln!(out, "{}", line(r));
    }
}

/// Human-readable rendering; `timings[i]` is the wall time of task `i`.
pub fn render_text(r: &Report, timings: &[Duration]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario {} (report v{})", r.scenario, r.version);
    for c in &r.caveats {
        let _ = writeln!(out, "  caveat: {c}");
    }
    for (k, t) in r.tasks.iter().enumerate() {
        let status = match t.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        let time = timings.get(k).map(|d| format!("  [{:.1} ms]", d.as_secs_f64() * 1e3)).unwrap_or_default();
        let expect = if t.expect_failure { "  (expected to fail)" } else { "" };
        let _ = writeln!(out, "[{}] {} {}: {status}{expect}{time}", t.index, t.command, t.subject);
        if let Some(c) = &t.certificate {
            let tail = c.tail_min_degree.map(|d| format!(", tail degrees >= {d}")).unwrap_or_default();
            let stab = c.stability.as_ref().map(|s| format!(", {s}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "    truncation N = {} on window [{}, {}]: {}{tail}{stab}",
                c.truncation, c.window[0], c.window[1], c.mode
            );
        }
        for tb in &t.tables {
            render_table(&mut out, tb);
        }
        for c in &t.caveats {
            let _ = writeln!(out, "    caveat: {c}");
        }
    }
    let failed = r.tasks.iter().filter(|t| t.status == Status::Fail).count();
    let _ = writeln!(out, "{} tasks, {} passed, {failed} failed", r.tasks.len(), r.tasks.len() - failed);
    out
}
