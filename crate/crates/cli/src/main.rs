use std::path::PathBuf;
use std::process::ExitCode;

use binoether_core::harness::{
    execute, verify_all, Direction, ExperimentConfig, HarnessError, Model, OutputFormat, Report, VerifyOptions,
};
use clap::{Args, Parser, Subcommand};

/// Numerical checks of non-Noether symmetries for Toda, NLS, KdV and mKdV.
///
/// Exit codes: 0 all checks pass, 1 a check failed, 2 invalid input or
/// calibration failure, 3 divergence, 4 I/O error.
#[derive(Debug, Parser)]
#[command(name = "binoether", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment described by a TOML file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output` in the file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// Run the canonical experiments for every model.
    VerifyAll {
        /// Comma-separated subset, e.g. `toda,kdv`.
        #[arg(long, value_delimiter = ',')]
        models: Vec<Model>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: OutputFormat,
        /// Divide every upper-bound tolerance by this factor.
        #[arg(long, default_value_t = 1.0)]
        tighten: f64,
        /// Worker threads (default: BINOETHER_THREADS, else all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Open Toda chain with random initial data.
    Toda {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Focusing nonlinear Schrödinger equation.
    Nse(FieldArgs),
    /// Korteweg-de Vries equation.
    Kdv(FieldArgs),
    /// Modified Korteweg-de Vries equation.
    Mkdv(FieldArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<OutputFormat>,
}

#[derive(Debug, Args)]
struct FieldArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long)]
    grid_n: Option<usize>,
    #[arg(long)]
    length: Option<f64>,
    #[arg(long)]
    amplitude: Option<f64>,
    #[arg(long)]
    width: Option<f64>,
    #[arg(long)]
    wavenumber: Option<f64>,
    #[arg(long)]
    speed: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mode: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    value: Option<f64>,
    #[arg(long)]
    snapshot: Option<PathBuf>,
}

fn config_from(model: Model, run: RunArgs) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(model);
    c.dt = run.dt;
    c.t_end = run.t_end;
    c.preset = run.preset;
    c.seed = run.seed;
    c.output = run.out;
    c.format = run.format;
    c
}

fn field_config(model: Model, a: FieldArgs) -> ExperimentConfig {
    let mut c = config_from(model, a.run);
    c.grid_n = a.grid_n;
    c.length = a.length;
    c.amplitude = a.amplitude;
    c.width = a.width;
    c.wavenumber = a.wavenumber;
    c.speed = a.speed;
    c.mode = a.mode;
    c.value = a.value;
    if a.snapshot.is_some() && c.preset.is_none() {
        c.preset = Some("snapshot".into());
    }
    c.snapshot = a.snapshot;
    c
}

fn print_report(report: &Report) {
    for c in &report.checks {
        let op = match c.direction {
            Direction::AtMost => "<=",
            Direction::AtLeast => ">=",
        };
        println!(
            "{} {:<28} {:>11.3e} {op} {:<9.1e} {}",
            if c.pass { "PASS " } else { "FAIL " },
            c.name,
            c.value,
            c.tolerance,
            c.provenance
        );
    }
    for s in &report.skipped {
        println!("SKIP  {:<28} {}", s.name, s.reason);
    }
    for (name, v) in &report.diagnostics {
        println!("INFO  {name:<28} {v:.6e}");
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let failed = report.failures().count();
    println!("{} checks, {failed} failed, {} skipped", report.checks.len(), report.skipped.len());
}

fn run_single(cfg: ExperimentConfig) -> Result<i32, HarnessError> {
    cfg.validate()?;
    let report = execute(&cfg)?;
    print_report(&report);
    Ok(report.exit_code())
}

fn dispatch(cli: Cli) -> Result<i32, HarnessError> {
    match cli.command {
        Command::Run { config, out, format } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if out.is_some() {
                cfg.output = out;
            }
            if format.is_some() {
                cfg.format = format;
            }
            run_single(cfg)
        }
        Command::VerifyAll { models, seed, out, format, tighten, threads } => {
            let opts = VerifyOptions { models, seed, output: out, format, tighten, threads };
            let summary = verify_all(&opts)?;
            print!("{}", summary.table());
            Ok(summary.exit_code)
        }
        Command::Toda { n, run } => {
            let mut cfg = config_from(Model::Toda, run);
            cfg.n = Some(n);
            run_single(cfg)
        }
        Command::Nse(a) => run_single(field_config(Model::Nse, a)),
        Command::Kdv(a) => run_single(field_config(Model::Kdv, a)),
        Command::Mkdv(a) => run_single(field_config(Model::Mkdv, a)),
    }
}

fn main() -> ExitCode {
    let code = match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
