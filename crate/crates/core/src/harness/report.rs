use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, OutputFormat};
use super::HarnessError;
use crate::exterior::CalibrationRecord;
use crate::pdemodels::{MkdvTimeSign, StructureCalibration};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Passes when `|value| <= tolerance`.
    AtMost,
    /// Passes when `|value| >= tolerance`.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub direction: Direction,
    pub pass: bool,
    pub provenance: String,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64, direction: Direction, provenance: impl Into<String>) -> Self {
        let pass = value.is_finite()
            && match direction {
                Direction::AtMost => value.abs() <= tolerance,
                Direction::AtLeast => value.abs() >= tolerance,
            };
        // JSON has no NaN or infinity
        let value = if value.is_finite() { value } else { f64::MAX };
        Self { name: name.into(), value, tolerance, direction, pass, provenance: provenance.into() }
    }

    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64, provenance: impl Into<String>) -> Self {
        Self::new(name, value, tolerance, Direction::AtMost, provenance)
    }

    pub fn at_least(name: impl Into<String>, value: f64, tolerance: f64, provenance: impl Into<String>) -> Self {
        Self::new(name, value, tolerance, Direction::AtLeast, provenance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub name: String,
    pub reason: String,
}

/// Conventions fixed before the checks ran.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CalibrationEcho {
    Toda(CalibrationRecord),
    Field {
        structure: StructureCalibration,
        /// `κ` with `L_E ω (numerical) = κ · display`, when it was measured.
        display_factor: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        time_sign: Option<MkdvTimeSign>,
    },
}

/// Wall-clock data; not part of determinism comparisons.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Runtime {
    pub wall_seconds: f64,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub calibration: CalibrationEcho,
    /// `name -> [(t, value)]`.
    pub series: BTreeMap<String, Vec<[f64; 2]>>,
    pub checks: Vec<CheckResult>,
    pub skipped: Vec<Skipped>,
    /// Reported quantities without a pass/fail judgement.
    pub diagnostics: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
    pub runtime: Runtime,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            super::EXIT_CHECK_FAILED
        }
    }

    /// The report with runtime data cleared, for determinism comparisons.
    pub fn without_runtime(&self) -> Self {
        Self { runtime: Runtime::default(), ..self.clone() }
    }

    pub fn to_json(&self) -> Result<String, HarnessError> {
        serde_json::to_string_pretty(self).map_err(|e| HarnessError::Validation(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Validation(e.to_string()))
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Io(format!("{}: {e}", path.display()))
}

fn csv_err(path: &Path, e: csv::Error) -> HarnessError {
    io_err(path, e)
}

/// Writes `report` into `dir` and returns the files written.
///
/// JSON: `report.json`. CSV: `series_<name>.csv` with columns `t,value` for
/// each series and `checks.csv` with `name,value,tolerance,pass,provenance`.
/// Floats are written with 17 significant digits.
pub fn emit(report: &Report, format: OutputFormat, dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    match format {
        OutputFormat::Json => {
            let path = dir.join("report.json");
            fs::write(&path, report.to_json()?).map_err(|e| io_err(&path, e))?;
            Ok(vec![path])
        }
        OutputFormat::Csv => {
            let mut written = Vec::new();
            for (name, rows) in &report.series {
                let path = dir.join(format!("series_{name}.csv"));
                let mut w = csv::Writer::from_path(&path).map_err(|e| csv_err(&path, e))?;
                w.write_record(["t", "value"]).map_err(|e| csv_err(&path, e))?;
                for [t, v] in rows {
                    w.write_record([format!("{t:.16e}"), format!("{v:.16e}")]).map_err(|e| csv_err(&path, e))?;
                }
                w.flush().map_err(|e| io_err(&path, e))?;
                written.push(path);
            }
            let path = dir.join("checks.csv");
            let mut w = csv::Writer::from_path(&path).map_err(|e| csv_err(&path, e))?;
            w.write_record(["name", "value", "tolerance", "pass", "provenance"]).map_err(|e| csv_err(&path, e))?;
            for c in &report.checks {
                w.write_record([
                    c.name.clone(),
                    format!("{:.16e}", c.value),
                    format!("{:.16e}", c.tolerance),
                    c.pass.to_string(),
                    c.provenance.clone(),
                ])
                .map_err(|e| csv_err(&path, e))?;
            }
            w.flush().map_err(|e| io_err(&path, e))?;
            written.push(path);
            Ok(written)
        }
    }
}

/// Reads a `t,value` series file written by [`emit`].
pub fn read_series_csv(path: &Path) -> Result<Vec<[f64; 2]>, HarnessError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    r.records()
        .map(|rec| {
            let rec = rec.map_err(|e| csv_err(path, e))?;
            let num = |i: usize| -> Result<f64, HarnessError> {
                rec.get(i)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| HarnessError::Validation(format!("{}: malformed row {rec:?}", path.display())))
            };
            Ok([num(0)?, num(1)?])
        })
        .collect()
}

/// Reads `checks.csv` as `(name, value, tolerance, pass, provenance)` rows.
pub fn read_checks_csv(path: &Path) -> Result<Vec<(String, f64, f64, bool, String)>, HarnessError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    r.records()
        .map(|rec| {
            let rec = rec.map_err(|e| csv_err(path, e))?;
            let bad = || HarnessError::Validation(format!("{}: malformed row {rec:?}", path.display()));
            let field = |i: usize| rec.get(i).ok_or_else(bad);
            Ok((
                field(0)?.to_string(),
                field(1)?.parse().map_err(|_| bad())?,
                field(2)?.parse().map_err(|_| bad())?,
                field(3)?.parse().map_err(|_| bad())?,
                field(4)?.to_string(),
            ))
        })
        .collect()
}
