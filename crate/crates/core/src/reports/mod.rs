//! Config-driven verification runs, their JSON reports and CSV plot data.

mod config;
mod output;
pub mod seeded;
mod suites;

use serde::{Deserialize, Serialize};

use crate::error::GeomError;

pub use config::{
    BasePointSpec, GeneratorSpec, OutputFormat, OutputSpec, RunConfig, SpindleTableSpec, Suite, SweepSpec, Tolerances,
    WarpedCurves, WarpedSuiteSpec, CONFIG_VERSION,
};
pub use output::{emit_plot_data, report_json, write_report, RunMetadata, METADATA_FILE, REPORT_FILE};
pub use suites::{run, run_many};

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = "sphericity";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    HypothesisViolation,
    Fail,
}

impl Status {
    pub fn from_pass(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// Process exit code: bound failures take precedence over hypothesis violations.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 2,
            Status::HypothesisViolation => 3,
        }
    }
}

/// One judged quantity. `slack >= 0` means the bound holds with room to spare.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub slack: f64,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, measured: f64, bound: f64, slack: f64, status: Status) -> Self {
        Check { name: name.into(), measured, bound, slack, status, note: None }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    fn hypothesis(name: impl Into<String>, err: &GeomError) -> Self {
        Check::new(name, f64::NAN, f64::NAN, f64::NAN, Status::HypothesisViolation).with_note(err.to_string())
    }
}

/// A CSV cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Plot-ready table written as `<name>.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub suite: Suite,
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Series {
    fn new(suite: Suite, name: impl Into<String>, columns: &[&str]) -> Self {
        Series { suite, name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub status: Status,
    pub checks: Vec<Check>,
    /// Full per-object reports.
    pub details: Vec<serde_json::Value>,
}

impl SuiteOutcome {
    fn new(suite: Suite, checks: Vec<Check>, details: Vec<serde_json::Value>) -> Self {
        SuiteOutcome { suite, status: overall(&checks), checks, details }
    }
}

fn overall(checks: &[Check]) -> Status {
    checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass)
}

/// Result of [`run`]. Contains nothing time- or machine-dependent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub config_hash: String,
    pub seed: u64,
    pub status: Status,
    pub suites: Vec<SuiteOutcome>,
    #[serde(skip)]
    pub series: Vec<Series>,
}

impl SuiteResult {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.suites.iter().flat_map(|s| s.checks.iter())
    }

    /// One-line summary for terminals.
    pub fn summary_line(&self) -> String {
        let count = |st: Status| self.checks().filter(|c| c.status == st).count();
        let worst = self
            .checks()
            .filter(|c| c.status == Status::Pass)
            .map(|c| c.slack)
            .filter(|s| s.is_finite())
            .fold(f64::INFINITY, f64::min);
        format!(
            "{}: {} checks, {} pass, {} fail, {} hypothesis violations, min slack {:e}",
            match self.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::HypothesisViolation => "HYPOTHESIS VIOLATION",
            },
            self.checks().count(),
            count(Status::Pass),
            count(Status::Fail),
            count(Status::HypothesisViolation),
            worst
        )
    }
}
