//! Study analysis report.

use std::fmt::Write;

use serde::{Deserialize, Serialize};
use terralens_core::analytics::{summarize_with, AnalyticsError, Estimate, Metric, ResponseRecord, Summary};

use crate::formats::FORMAT_VERSION;
use crate::logs::InteractionTable;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub participants: usize,
    pub responses: usize,
    pub logs: usize,
    /// Logged sample intervals longer than 0.5 s, summed over all logs.
    pub gap_warnings: usize,
    #[serde(flatten)]
    pub summary: Summary,
}

pub fn analyze(records: &[ResponseRecord], logs: &InteractionTable) -> Result<Report, AnalyticsError> {
    let summary = summarize_with(records, |r| logs.get(&(r.participant.clone(), r.stimulus_id.clone())).copied())?;
    let mut participants: Vec<&str> = records.iter().map(|r| r.participant.as_str()).collect();
    participants.sort_unstable();
    participants.dedup();
    Ok(Report {
        version: FORMAT_VERSION,
        participants: participants.len(),
        responses: records.len(),
        logs: logs.len(),
        gap_warnings: logs.values().map(|a| a.gap_warnings).sum(),
        summary,
    })
}

fn est(e: Option<&Estimate>, precision: usize) -> String {
    match e {
        None => "-".into(),
        Some(e) => match (e.ci_low, e.ci_high) {
            (Some(lo), Some(hi)) => format!("{:.p$} [{:.p$}, {:.p$}]", e.mean, lo, hi, p = precision),
            _ => format!("{:.p$}", e.mean, p = precision),
        },
    }
}

/// Fixed-width text rendering of a report.
pub fn table(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<11} {:<9} {:<15} {:>5}  {:<26} {:<26} {:>8} {:>8} {:>9} {:>9}",
        "vis",
        "task",
        "difficulty",
        "n",
        "accuracy [95% CI]",
        "time s [95% CI]",
        "head m",
        "ctrl m",
        "head deg",
        "ctrl deg"
    );
    for c in &report.summary.cells {
        let i = c.interaction.as_ref();
        let mean = |f: fn(&terralens_core::analytics::InteractionSummary) -> Estimate, p: usize| {
            i.map_or("-".to_string(), |i| format!("{:.p$}", f(i).mean, p = p))
        };
        let _ = writeln!(
            out,
            "{:<11} {:<9} {:<15} {:>5}  {:<26} {:<26} {:>8} {:>8} {:>9} {:>9}",
            c.visualisation.name(),
            c.task.name(),
            c.difficulty.map_or("all", |d| d.name()),
            c.responses,
            est(Some(&c.accuracy), 3),
            est(c.time.as_ref(), 2),
            mean(|i| i.head_move_m, 2),
            mean(|i| i.controller_move_m, 2),
            mean(|i| i.head_rot_deg, 1),
            mean(|i| i.controller_rot_deg, 1),
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "Friedman test across visualisations");
    let _ = writeln!(out, "{:<9} {:<15} {:<8} {:>5} {:>10} {:>8}", "task", "difficulty", "metric", "n", "chi2", "p");
    for t in &report.summary.tests {
        let metric = match t.metric {
            Metric::Accuracy => "accuracy",
            Metric::Time => "time",
        };
        let (n, chi2, p) = match &t.result {
            Some(r) => (r.subjects.to_string(), format!("{:.3}", r.chi2), format!("{:.4}", r.p)),
            None => ("-".into(), "-".into(), "-".into()),
        };
        let _ = writeln!(
            out,
            "{:<9} {:<15} {:<8} {:>5} {:>10} {:>8}",
            t.task.name(),
            t.difficulty.map_or("all", |d| d.name()),
            metric,
            n,
            chi2,
            p
        );
    }
    out
}
