//! Experiment runner behind the `pathlab` binary.

pub mod config;
pub mod experiments;
pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use serde::Deserialize;
use thiserror::Error;

use config::Experiment;
use report::RunRecord;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("incomplete report, missing: {}", .0.join(", "))]
    Incomplete(Vec<String>),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Incomplete(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<pathlab_core::Error> for CliError {
    fn from(e: pathlab_core::Error) -> Self {
        match e {
            pathlab_core::Error::InvalidArgument(msg) => CliError::Config(format!("params: {msg}")),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

/// Run a path-integral experiment or aggregate no-go diagnostics.
#[derive(Debug, Parser)]
#[command(name = "pathlab", version)]
struct Args {
    experiment: Experiment,
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory that output paths are resolved against.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Glob of run records (report only).
    #[arg(long)]
    records: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportParams {
    records: String,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("PATHLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Config(format!("PATHLAB_THREADS: expected a positive integer, got {value:?}")))?;
    // a second in-process run finds the pool already built; results do not
    // depend on the thread count, so that is not an error
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn resolve(out: &Option<PathBuf>, output_path: &str, ext: &str) -> PathBuf {
    let base = match out {
        Some(dir) => dir.join(output_path),
        None => PathBuf::from(output_path),
    };
    let mut s = base.into_os_string();
    s.push(ext);
    PathBuf::from(s)
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn run_experiment(args: &Args) -> Result<(), CliError> {
    let path = args
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config is required".into()))?;
    let mut cfg = config::load(path)?;
    if cfg.experiment != args.experiment {
        return Err(CliError::Config(format!(
            "experiment: config names {}, command line names {}",
            cfg.experiment.name(),
            args.experiment.name()
        )));
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let start = Instant::now();
    let outcome = experiments::run(&cfg)?;
    let wall = start.elapsed().as_secs_f64();

    let csv_path = resolve(&args.out, &cfg.output_path, ".csv");
    write(&csv_path, &outcome.table.to_csv())?;
    let record = RunRecord {
        seed: cfg.seed,
        config: cfg.clone(),
        summary: outcome.summary,
        wall_time_s: wall,
    };
    let json = serde_json::to_string_pretty(&record).map_err(|e| CliError::Io(e.to_string()))?;
    write(&resolve(&args.out, &cfg.output_path, ".run.json"), &(json + "\n"))?;
    println!("{} -> {}", cfg.experiment.name(), csv_path.display());
    Ok(())
}

fn run_report(args: &Args) -> Result<bool, CliError> {
    let (pattern, output_path) = match (&args.records, &args.config) {
        (Some(r), _) => (r.clone(), "report".to_string()),
        (None, Some(path)) => {
            let cfg = config::load(path)?;
            if cfg.experiment != Experiment::Report {
                return Err(CliError::Config(format!("experiment: expected report, got {}", cfg.experiment.name())));
            }
            let p: ReportParams = config::params(&cfg)?;
            (p.records, cfg.output_path)
        }
        (None, None) => return Err(CliError::Config("report needs --records or --config".into())),
    };
    let records = report::load_records(&pattern)?;
    let rep = report::build(&records)?;
    let table = report::render_table(&rep);
    let json = serde_json::to_string_pretty(&rep).map_err(|e| CliError::Io(e.to_string()))?;
    write(&resolve(&args.out, &output_path, ".json"), &(json + "\n"))?;
    write(&resolve(&args.out, &output_path, ".txt"), &table)?;
    print!("{table}");
    Ok(rep.all_numeric_exhibited)
}

/// Parse `args` (program name first), run, and return the process exit code.
pub fn run_cli<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return e.exit_code() as u8;
        }
    };
    let result = configure_threads().and_then(|()| {
        if args.experiment == Experiment::Report {
            run_report(&args)
        } else {
            run_experiment(&args).map(|()| true)
        }
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("pathlab: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invalid_argument_maps_to_config_exit() {
        let e: CliError = pathlab_core::Error::InvalidArgument("t".into()).into();
        assert_eq!(e.exit_code(), 2);
        let e: CliError = pathlab_core::Error::Numeric("x".into()).into();
        assert_eq!(e.exit_code(), 3);
    }
}
