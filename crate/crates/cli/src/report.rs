//! Residual reports as human tables or JSON.

use congforge_core::ResidualReport;
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Serialize)]
pub struct ReportJson<'a> {
    pub relation: &'a str,
    pub scale: &'a str,
    pub threshold: f64,
    /// `null` when a residual is not finite.
    pub max_residual: Option<f64>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flagged: Option<&'a str>,
    pub entries: Vec<EntryJson<'a>>,
    pub failures: Vec<&'a str>,
}

#[derive(Serialize)]
pub struct EntryJson<'a> {
    pub label: &'a str,
    pub residual: Option<f64>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn report_json(rep: &ResidualReport) -> ReportJson<'_> {
    ReportJson {
        relation: &rep.relation,
        scale: &rep.scale,
        threshold: rep.threshold,
        max_residual: finite(rep.max_residual),
        passed: rep.passed,
        flagged: rep.flagged.as_deref(),
        entries: rep
            .entries
            .iter()
            .map(|e| EntryJson { label: &e.label, residual: finite(e.residual) })
            .collect(),
        failures: rep.failures().map(|e| e.label.as_str()).collect(),
    }
}

pub fn render_table(rep: &ResidualReport) -> String {
    let width = rep.entries.iter().map(|e| e.label.chars().count()).max().unwrap_or(0).max(5);
    let mut out = String::new();
    let _ = writeln!(out, "relation:  {}", rep.relation);
    let _ = writeln!(out, "scale:     {}", rep.scale);
    let _ = writeln!(out, "threshold: {:e}", rep.threshold);
    for e in &rep.entries {
        let mark = if e.residual <= rep.threshold { "" } else { "  <-- FAIL" };
        let pad = width - e.label.chars().count();
        let _ = writeln!(out, "  {}{}  {:.3e}{mark}", e.label, " ".repeat(pad), e.residual);
    }
    if let Some(f) = &rep.flagged {
        let _ = writeln!(out, "flag:      {f}");
    }
    let verdict = if rep.passed { "PASS" } else { "FAIL" };
    let _ = writeln!(out, "verdict:   {verdict} (max residual {:.3e})", rep.max_residual);
    out
}
