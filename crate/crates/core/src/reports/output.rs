use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::{Cell, OutputFormat, Suite, SuiteResult};

pub const REPORT_FILE: &str = "report.json";
pub const METADATA_FILE: &str = "metadata.json";
const CHECKS_FILE: &str = "checks.csv";

/// Run facts that vary between identical runs, kept out of the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub generated_at_unix: u64,
    pub tool_version: String,
    pub config_hash: String,
}

/// Pretty JSON with a trailing newline.
pub fn report_json(result: &SuiteResult) -> String {
    let mut s = serde_json::to_string_pretty(result).expect("report serializes");
    s.push('\n');
    s
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_csv(path: &Path, columns: &[String], rows: impl Iterator<Item = Vec<String>>) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(columns)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()
}

/// Writes every series of `result` (or only those of suite `kind`) as `<name>.csv` in
/// `dir`. Numbers use 17 significant digits. Asking for a suite without series is an
/// error that lists the series present.
pub fn emit_plot_data(result: &SuiteResult, dir: &Path, kind: Option<Suite>) -> io::Result<Vec<PathBuf>> {
    if let Some(k) = kind {
        if !result.series.iter().any(|s| s.suite == k) {
            let names: Vec<&str> = result.series.iter().map(|s| s.name.as_str()).collect();
            let available = if names.is_empty() { "none".to_string() } else { names.join(", ") };
            return Err(io::Error::new(
                io::ErrorKind::InvalidInput,
                format!("no {} series in this result; available: {available}", k.label()),
            ));
        }
    }
    fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for s in result.series.iter().filter(|s| kind.is_none_or(|k| k == s.suite)) {
        let path = dir.join(format!("{}.csv", s.name));
        let rows = s.rows.iter().map(|r| {
            r.iter()
                .map(|c| match c {
                    Cell::Num(x) => num(*x),
                    Cell::Text(t) => t.clone(),
                })
                .collect()
        });
        write_csv(&path, &s.columns, rows)?;
        out.push(path);
    }
    Ok(out)
}

/// Writes `report.json`, `checks.csv` and the plot series as selected by `format`, and
/// always `metadata.json`.
pub fn write_report(result: &SuiteResult, dir: &Path, format: OutputFormat) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    if format.json() {
        let path = dir.join(REPORT_FILE);
        fs::write(&path, report_json(result))?;
        out.push(path);
    }
    if format.csv() {
        let path = dir.join(CHECKS_FILE);
        let columns: Vec<String> = ["suite", "name", "measured", "bound", "slack", "status"].map(String::from).to_vec();
        let rows = result.suites.iter().flat_map(|s| {
            s.checks.iter().map(move |c| {
                let status = serde_json::to_value(c.status).expect("status serializes");
                vec![
                    s.suite.label().to_string(),
                    c.name.clone(),
                    num(c.measured),
                    num(c.bound),
                    num(c.slack),
                    status.as_str().unwrap_or_default().to_string(),
                ]
            })
        });
        write_csv(&path, &columns, rows)?;
        out.push(path);
        out.extend(emit_plot_data(result, dir, None)?);
    }
    let meta = RunMetadata {
        generated_at_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        tool_version: result.tool_version.clone(),
        config_hash: result.config_hash.clone(),
    };
    let path = dir.join(METADATA_FILE);
    fs::write(&path, serde_json::to_string_pretty(&meta).expect("metadata serializes") + "\n")?;
    out.push(path);
    Ok(out)
}
