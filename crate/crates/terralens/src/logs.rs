//! CSV input: response records and per-trial pose logs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use terralens_core::analytics::{aggregate, AggregateInteraction, PoseSample, Quat, ResponseRecord};
use terralens_core::scene::{SceneKind, WorldPoint};
use terralens_core::stimuli::{Answer, Difficulty, TaskFamily};

use crate::error::{CliError, Result};

#[derive(Debug, Deserialize)]
struct ResponseRow {
    participant: String,
    visualisation: String,
    task: String,
    difficulty: String,
    stimulus_id: String,
    chosen: String,
    correct: String,
    response_time: f64,
}

fn parse_answer(s: &str) -> Option<Answer> {
    match s.trim().to_ascii_lowercase().as_str() {
        "first" => Some(Answer::First),
        "second" => Some(Answer::Second),
        "hit" => Some(Answer::Hit),
        "miss" => Some(Answer::Miss),
        _ => None,
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" => Some(true),
        "false" | "0" | "no" => Some(false),
        _ => None,
    }
}

impl ResponseRow {
    fn into_record(self) -> Result<ResponseRecord, String> {
        let field = |name: &str, v: &str| format!("unknown {name} {v:?}");
        Ok(ResponseRecord {
            visualisation: SceneKind::from_name(self.visualisation.trim())
                .ok_or_else(|| field("visualisation", &self.visualisation))?,
            task: TaskFamily::from_name(self.task.trim()).ok_or_else(|| field("task", &self.task))?,
            difficulty: Difficulty::from_name(self.difficulty.trim())
                .ok_or_else(|| field("difficulty", &self.difficulty))?,
            chosen: parse_answer(&self.chosen).ok_or_else(|| field("answer", &self.chosen))?,
            correct: parse_bool(&self.correct).ok_or_else(|| field("correct flag", &self.correct))?,
            participant: self.participant,
            stimulus_id: self.stimulus_id,
            response_time: self.response_time,
        })
    }
}

pub fn read_responses(path: &Path) -> Result<Vec<ResponseRecord>> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Input { path: path.into(), source })?;
    parse_responses(&text).map_err(|m| CliError::malformed(path, m))
}

pub fn parse_responses(text: &str) -> Result<Vec<ResponseRecord>, String> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, row) in reader.deserialize::<ResponseRow>().enumerate() {
        let row = row.map_err(|e| e.to_string())?;
        out.push(row.into_record().map_err(|m| format!("row {}: {m}", i + 1))?);
    }
    Ok(out)
}

#[derive(Debug, Deserialize)]
struct LogRow {
    t: f64,
    head_x: f64,
    head_y: f64,
    head_z: f64,
    head_qw: f64,
    head_qx: f64,
    head_qy: f64,
    head_qz: f64,
    ctrl_x: f64,
    ctrl_y: f64,
    ctrl_z: f64,
    ctrl_qw: f64,
    ctrl_qx: f64,
    ctrl_qy: f64,
    ctrl_qz: f64,
}

impl From<LogRow> for PoseSample {
    fn from(r: LogRow) -> Self {
        PoseSample {
            t: r.t,
            head_pos: WorldPoint::new(r.head_x, r.head_y, r.head_z),
            head_rot: Quat::new(r.head_qw, r.head_qx, r.head_qy, r.head_qz),
            controller_pos: WorldPoint::new(r.ctrl_x, r.ctrl_y, r.ctrl_z),
            controller_rot: Quat::new(r.ctrl_qw, r.ctrl_qx, r.ctrl_qy, r.ctrl_qz),
        }
    }
}

pub fn parse_log(text: &str) -> Result<Vec<PoseSample>, String> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    reader.deserialize::<LogRow>().map(|r| r.map(PoseSample::from).map_err(|e| e.to_string())).collect()
}

/// Aggregates keyed by (participant, stimulus id).
pub type InteractionTable = BTreeMap<(String, String), AggregateInteraction>;

/// Reads `dir/<participant>/<stimulus_id>.csv`. A missing directory gives an
/// empty table.
pub fn read_log_dir(dir: &Path) -> Result<InteractionTable> {
    let mut table = InteractionTable::new();
    if !dir.exists() {
        return Ok(table);
    }
    for participant_dir in sorted_entries(dir)? {
        if !participant_dir.is_dir() {
            continue;
        }
        let participant = file_name(&participant_dir);
        for file in sorted_entries(&participant_dir)? {
            if file.extension().and_then(|e| e.to_str()) != Some("csv") {
                continue;
            }
            let text =
                std::fs::read_to_string(&file).map_err(|source| CliError::Input { path: file.clone(), source })?;
            let samples = parse_log(&text).map_err(|m| CliError::malformed(&file, m))?;
            let agg = aggregate(&samples).map_err(|e| CliError::malformed(&file, e))?;
            let stem = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            table.insert((participant.clone(), stem), agg);
        }
    }
    Ok(table)
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let rd = std::fs::read_dir(dir).map_err(|source| CliError::Input { path: dir.into(), source })?;
    let mut v = rd
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(|source| CliError::Input { path: dir.into(), source })?;
    v.sort();
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_responses() {
        let text = "participant,visualisation,task,difficulty,stimulus_id,chosen,correct,response_time\n\
                    p1,exocentric,distance,easy,s1,first,true,3.5\n\
                    p1,flat,direction,far,s2,miss,0,4\n";
        let r = parse_responses(text).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[1].visualisation, SceneKind::FlatMap);
        assert!(!r[1].correct);
        assert!(parse_responses("participant\nx\n").is_err());
        assert!(parse_responses(&text.replace("easy", "trivial")).is_err());
    }

    #[test]
    fn parses_log() {
        let text = "t,head_x,head_y,head_z,head_qw,head_qx,head_qy,head_qz,ctrl_x,ctrl_y,ctrl_z,ctrl_qw,ctrl_qx,ctrl_qy,ctrl_qz\n\
                    0,0,0,0,1,0,0,0,0,0,0,1,0,0,0\n\
                    0.1,1,0,0,1,0,0,0,0,0,0,1,0,0,0\n";
        let s = parse_log(text).unwrap();
        assert_eq!(aggregate(&s).unwrap().head_move_m, 1.0);
    }
}
