use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use chrono::{SecondsFormat, Utc};
use serde::Serialize;

/// One line of the append-only run log.
#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub params: serde_json::Value,
    pub started: String,
    pub finished: String,
    pub outcome: String,
    pub version: String,
}

pub fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// Append one record as a single JSON line; a single write keeps lines
/// intact under concurrent appenders. Logging failures are reported but do
/// not fail the command.
pub fn append(results_dir: &Path, record: &RunRecord) {
    let write = || -> std::io::Result<()> {
        std::fs::create_dir_all(results_dir)?;
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(results_dir.join("runs.jsonl"))?;
        let mut line = serde_json::to_string(record).expect("run record serializes");
        line.push('\n');
        f.write_all(line.as_bytes())
    };
    if let Err(e) = write() {
        eprintln!("warning: could not append run log: {e}");
    }
}
