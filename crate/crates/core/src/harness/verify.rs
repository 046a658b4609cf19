use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Model, OutputFormat};
use super::report::{emit, Direction, Report};
use super::{run, HarnessError, EXIT_OK};

/// Caps the worker threads of [`verify_all`].
pub const THREADS_ENV: &str = "BINOETHER_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Models to run; empty means all.
    pub models: Vec<Model>,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    /// Upper-bound tolerances are divided by this factor.
    pub tighten: f64,
    /// Overrides the thread cap from the environment.
    pub threads: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { models: Vec::new(), seed: 0, output: None, format: OutputFormat::Json, tighten: 1.0, threads: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub label: String,
    pub exit_code: i32,
    pub report: Option<Report>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub runs: Vec<RunOutcome>,
    /// Largest exit code over the runs.
    pub exit_code: i32,
    pub wall_seconds: f64,
}

/// The configurations run by [`verify_all`], labelled.
pub fn canonical_configs(seed: u64) -> Vec<(String, ExperimentConfig)> {
    let base = |model: Model, preset: &str, dt: f64, t_end: f64| {
        let mut c = ExperimentConfig::new(model);
        c.preset = Some(preset.to_string());
        c.dt = Some(dt);
        c.t_end = Some(t_end);
        c.seed = seed;
        c
    };
    let mut out = Vec::new();
    for n in [2, 3, 4, 6] {
        let mut c = base(Model::Toda, "random", 1e-3, 10.0);
        c.n = Some(n);
        out.push((format!("toda-n{n}"), c));
    }
    out.push(("nse-gaussian".into(), base(Model::Nse, "gaussian", 1e-3, 1.0)));
    out.push(("nse-planewave".into(), base(Model::Nse, "planewave", 1e-3, 1.0)));
    out.push(("kdv-gaussian".into(), base(Model::Kdv, "gaussian", 1e-3, 1.0)));
    out.push(("kdv-soliton".into(), base(Model::Kdv, "soliton", 1e-3, 1.0)));
    out.push(("mkdv-gaussian".into(), base(Model::Mkdv, "gaussian", 1e-3, 0.5)));
    out.push(("mkdv-constant".into(), base(Model::Mkdv, "constant", 1e-3, 0.5)));
    out.push(("mkdv-zero".into(), base(Model::Mkdv, "zero", 1e-3, 0.5)));
    out
}

fn thread_cap(opts: &VerifyOptions) -> Result<Option<usize>, HarnessError> {
    if let Some(n) = opts.threads {
        return Ok(Some(n.max(1)));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n >= 1)
            .map(Some)
            .ok_or_else(|| HarnessError::Validation(format!("{THREADS_ENV} must be a positive integer, got '{v}'"))),
        Err(_) => Ok(None),
    }
}

fn tighten(report: &mut Report, factor: f64) {
    for c in report.checks.iter_mut().filter(|c| c.direction == Direction::AtMost) {
        c.tolerance /= factor;
        c.pass = c.pass && c.value.abs() <= c.tolerance;
    }
}

/// Runs the canonical configurations in parallel and collects their reports.
pub fn verify_all(opts: &VerifyOptions) -> Result<VerifySummary, HarnessError> {
    if !(opts.tighten.is_finite() && opts.tighten > 0.0) {
        return Err(HarnessError::Validation(format!("tightening factor must be positive, got {}", opts.tighten)));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap(opts)? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| HarnessError::Validation(e.to_string()))?;
    let configs: Vec<(String, ExperimentConfig)> = canonical_configs(opts.seed)
        .into_iter()
        .filter(|(_, c)| opts.models.is_empty() || opts.models.contains(&c.model))
        .collect();
    let start = Instant::now();
    let runs: Vec<RunOutcome> = pool.install(|| {
        configs
            .par_iter()
            .map(|(label, cfg)| match run(cfg) {
                Ok(mut report) => {
                    if opts.tighten != 1.0 {
                        tighten(&mut report, opts.tighten);
                    }
                    RunOutcome { label: label.clone(), exit_code: report.exit_code(), report: Some(report), error: None }
                }
                Err(e) => RunOutcome { label: label.clone(), exit_code: e.exit_code(), report: None, error: Some(e.to_string()) },
            })
            .collect()
    });
    let summary = VerifySummary {
        seed: opts.seed,
        exit_code: runs.iter().map(|r| r.exit_code).max().unwrap_or(EXIT_OK),
        runs,
        wall_seconds: start.elapsed().as_secs_f64(),
    };
    if let Some(dir) = &opts.output {
        write_summary(&summary, opts.format, dir)?;
    }
    Ok(summary)
}

fn write_summary(summary: &VerifySummary, format: OutputFormat, dir: &std::path::Path) -> Result<(), HarnessError> {
    let io = |e: std::io::Error| HarnessError::Io(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    for run in &summary.runs {
        if let Some(report) = &run.report {
            emit(report, format, &dir.join(&run.label))?;
        }
    }
    let path = dir.join("verify_all.json");
    let text = serde_json::to_string_pretty(summary).map_err(|e| HarnessError::Validation(e.to_string()))?;
    fs::write(&path, text).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

impl VerifySummary {
    pub fn check_count(&self) -> usize {
        self.runs.iter().filter_map(|r| r.report.as_ref()).map(|r| r.checks.len()).sum()
    }

    pub fn failure_count(&self) -> usize {
        self.runs.iter().filter_map(|r| r.report.as_ref()).map(|r| r.failures().count()).sum()
    }

    /// One line per check, skip and error, then a totals line.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let mut skipped = 0;
        let mut errors = 0;
        for run in &self.runs {
            if let Some(err) = &run.error {
                errors += 1;
                let _ = writeln!(s, "ERROR {:<15} exit {}: {err}", run.label, run.exit_code);
            }
            let Some(report) = &run.report else { continue };
            for c in &report.checks {
                let op = match c.direction {
                    Direction::AtMost => "<=",
                    Direction::AtLeast => ">=",
                };
                let _ = writeln!(
                    s,
                    "{} {:<15} {:<28} {:>11.3e} {op} {:<9.1e} {}",
                    if c.pass { "PASS " } else { "FAIL " },
                    run.label,
                    c.name,
                    c.value,
                    c.tolerance,
                    c.provenance
                );
            }
            for k in &report.skipped {
                skipped += 1;
                let _ = writeln!(s, "SKIP  {:<15} {:<28} {}", run.label, k.name, k.reason);
            }
        }
        let _ = writeln!(
            s,
            "{} checks, {} failed, {skipped} skipped, {errors} errors in {:.1}s; exit code {}",
            self.check_count(),
            self.failure_count(),
            self.wall_seconds,
            self.exit_code
        );
        s
    }
}
