//! Experiment configuration, verification suites and reports.
//!
//! [`run`] executes one [`ExperimentConfig`] and returns a [`Report`] of
//! named checks; [`verify_all`] runs the canonical configurations for every
//! model. Exit codes: 0 all checks pass, 1 a check failed, 2 invalid input or
//! failed calibration, 3 divergence, 4 I/O.

mod config;
mod report;
mod suites;
mod verify;

pub use config::{default_tolerance, ExperimentConfig, InitialData, Model, OutputFormat, FIELD_TOLERANCES, TODA_TOLERANCES};
pub use report::{
    emit, read_checks_csv, read_series_csv, CalibrationEcho, CheckResult, Direction, Report, Runtime, Skipped,
};
pub use suites::{structure_calibration, toda_calibration, SuiteField};
pub use verify::{canonical_configs, verify_all, RunOutcome, VerifyOptions, VerifySummary, THREADS_ENV};

use std::time::Instant;

use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DIVERGENCE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("divergence: {0}")]
    Divergence(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Validation(_) | HarnessError::Calibration(_) => EXIT_INVALID,
            HarnessError::Divergence(_) => EXIT_DIVERGENCE,
            HarnessError::Io(_) => EXIT_IO,
        }
    }
}

/// Runs every check that applies to `cfg`.
pub fn run(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    cfg.validate()?;
    let start = Instant::now();
    let outcome = match cfg.model {
        Model::Toda => suites::run_toda(cfg)?,
        _ => suites::run_field(cfg)?,
    };
    Ok(Report {
        config: cfg.clone(),
        calibration: outcome.calibration.expect("suites record their calibration"),
        series: outcome.series,
        checks: outcome.checks,
        skipped: outcome.skipped,
        diagnostics: outcome.diagnostics,
        warnings: outcome.warnings,
        runtime: Runtime { wall_seconds: start.elapsed().as_secs_f64(), threads: rayon::current_num_threads() },
    })
}

/// [`run`], then writes the report to `cfg.output` when set.
pub fn execute(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let report = run(cfg)?;
    if let Some(dir) = &cfg.output {
        emit(&report, cfg.format.unwrap_or_default(), dir)?;
    }
    Ok(report)
}
