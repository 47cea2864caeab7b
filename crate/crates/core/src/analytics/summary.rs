use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::dist::student_t_quantile;
use super::friedman::{friedman, FriedmanResult};
use super::interaction::AggregateInteraction;
use super::AnalyticsError;
use crate::scene::SceneKind;
use crate::stimuli::{accuracy_score, Answer, Difficulty, TaskFamily};

/// One answered trial.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResponseRecord {
    pub participant: String,
    pub visualisation: SceneKind,
    pub task: TaskFamily,
    pub difficulty: Difficulty,
    pub stimulus_id: String,
    pub chosen: Answer,
    pub correct: bool,
    /// Seconds.
    pub response_time: f64,
}

/// Mean over participants with a 95 % t interval. The interval is absent
/// when fewer than two participants contribute.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Estimate {
    pub mean: f64,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub n: usize,
}

impl Estimate {
    pub fn from_values(values: &[f64]) -> Option<Estimate> {
        let n = values.len();
        if n == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        if n < 2 {
            return Some(Estimate { mean, ci_low: None, ci_high: None, n });
        }
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
        let half = student_t_quantile(0.975, (n - 1) as f64) * (var / n as f64).sqrt();
        Some(Estimate { mean, ci_low: Some(mean - half), ci_high: Some(mean + half), n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InteractionSummary {
    pub head_move_m: Estimate,
    pub controller_move_m: Estimate,
    pub head_rot_deg: Estimate,
    pub controller_rot_deg: Estimate,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CellSummary {
    pub visualisation: SceneKind,
    pub task: TaskFamily,
    /// `None` for the cell pooling all difficulties.
    pub difficulty: Option<Difficulty>,
    pub responses: usize,
    pub accuracy: Estimate,
    /// Correct responses only; absent if no participant answered correctly.
    pub time: Option<Estimate>,
    /// Correct responses with a matching log only.
    pub interaction: Option<InteractionSummary>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VisualisationTest {
    pub task: TaskFamily,
    pub difficulty: Option<Difficulty>,
    pub metric: Metric,
    /// Absent when fewer than two participants saw every visualisation.
    pub result: Option<FriedmanResult>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Metric {
    Accuracy,
    Time,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Summary {
    pub cells: Vec<CellSummary>,
    pub tests: Vec<VisualisationTest>,
}

type CellKey = (SceneKind, TaskFamily, Option<Difficulty>);

#[derive(Default)]
struct ParticipantCell {
    correct: usize,
    total: usize,
    times: Vec<f64>,
    logs: Vec<AggregateInteraction>,
}

impl ParticipantCell {
    fn accuracy(&self) -> f64 {
        // total > 0 by construction.
        accuracy_score(self.correct, self.total).unwrap_or(0.0)
    }

    fn mean_time(&self) -> Option<f64> {
        mean(&self.times)
    }
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

fn group<F>(
    records: &[ResponseRecord],
    interactions: F,
) -> Result<BTreeMap<CellKey, BTreeMap<&str, ParticipantCell>>, AnalyticsError>
where
    F: Fn(&ResponseRecord) -> Option<AggregateInteraction>,
{
    if records.is_empty() {
        return Err(AnalyticsError::EmptySample);
    }
    let mut cells: BTreeMap<CellKey, BTreeMap<&str, ParticipantCell>> = BTreeMap::new();
    for (index, r) in records.iter().enumerate() {
        if !(r.response_time > 0.0 && r.response_time.is_finite()) {
            return Err(AnalyticsError::InvalidResponseTime { index });
        }
        let log = if r.correct { interactions(r) } else { None };
        for key in [(r.visualisation, r.task, Some(r.difficulty)), (r.visualisation, r.task, None)] {
            let cell = cells.entry(key).or_default().entry(r.participant.as_str()).or_default();
            cell.total += 1;
            if r.correct {
                cell.correct += 1;
                cell.times.push(r.response_time);
            }
            if let Some(log) = log {
                cell.logs.push(log);
            }
        }
    }
    Ok(cells)
}

fn interaction_summary(parts: &BTreeMap<&str, ParticipantCell>) -> Option<InteractionSummary> {
    let per_participant: Vec<[f64; 4]> = parts
        .values()
        .filter(|c| !c.logs.is_empty())
        .map(|c| {
            let n = c.logs.len() as f64;
            let s = c.logs.iter().fold([0.0; 4], |acc, l| {
                [
                    acc[0] + l.head_move_m,
                    acc[1] + l.controller_move_m,
                    acc[2] + l.head_rot_deg,
                    acc[3] + l.controller_rot_deg,
                ]
            });
            s.map(|v| v / n)
        })
        .collect();
    let column = |i: usize| {
        let v: Vec<f64> = per_participant.iter().map(|r| r[i]).collect();
        Estimate::from_values(&v)
    };
    Some(InteractionSummary {
        head_move_m: column(0)?,
        controller_move_m: column(1)?,
        head_rot_deg: column(2)?,
        controller_rot_deg: column(3)?,
    })
}

/// Per-condition accuracy and time summary with no interaction data.
pub fn summarize(records: &[ResponseRecord]) -> Result<Summary, AnalyticsError> {
    summarize_with(records, |_| None)
}

/// Per-condition summary. Cells are (visualisation, task, difficulty) plus
/// one pooled cell per (visualisation, task). Every statistic is computed
/// per participant first, then averaged across participants. Friedman tests
/// compare the four visualisations within each task, using participants
/// who contributed to all four.
pub fn summarize_with<F>(records: &[ResponseRecord], interactions: F) -> Result<Summary, AnalyticsError>
where
    F: Fn(&ResponseRecord) -> Option<AggregateInteraction>,
{
    let cells = group(records, interactions)?;
    let mut out = Vec::with_capacity(cells.len());
    for (&(visualisation, task, difficulty), parts) in &cells {
        let acc: Vec<f64> = parts.values().map(ParticipantCell::accuracy).collect();
        let times: Vec<f64> = parts.values().filter_map(ParticipantCell::mean_time).collect();
        out.push(CellSummary {
            visualisation,
            task,
            difficulty,
            responses: parts.values().map(|c| c.total).sum(),
            accuracy: Estimate::from_values(&acc).ok_or(AnalyticsError::EmptySample)?,
            time: Estimate::from_values(&times),
            interaction: interaction_summary(parts),
        });
    }

    let mut tests = Vec::new();
    let mut conditions: Vec<(TaskFamily, Option<Difficulty>)> = cells.keys().map(|&(_, t, d)| (t, d)).collect();
    conditions.sort();
    conditions.dedup();
    for (task, difficulty) in conditions {
        for metric in [Metric::Accuracy, Metric::Time] {
            let rows = visualisation_matrix(&cells, task, difficulty, metric);
            tests.push(VisualisationTest { task, difficulty, metric, result: friedman(&rows).ok() });
        }
    }
    Ok(Summary { cells: out, tests })
}

/// Participants × visualisations matrix of per-participant means, rows in
/// participant order, keeping only complete rows.
fn visualisation_matrix(
    cells: &BTreeMap<CellKey, BTreeMap<&str, ParticipantCell>>,
    task: TaskFamily,
    difficulty: Option<Difficulty>,
    metric: Metric,
) -> Vec<[f64; 4]> {
    let mut rows: BTreeMap<&str, [Option<f64>; 4]> = BTreeMap::new();
    for (j, vis) in SceneKind::ALL.iter().enumerate() {
        let Some(parts) = cells.get(&(*vis, task, difficulty)) else { continue };
        for (p, c) in parts {
            let v = match metric {
                Metric::Accuracy => Some(c.accuracy()),
                Metric::Time => c.mean_time(),
            };
            rows.entry(p).or_default()[j] = v;
        }
    }
    rows.values()
        .filter_map(|r| {
            let [a, b, c, d] = *r;
            Some([a?, b?, c?, d?])
        })
        .collect()
}
