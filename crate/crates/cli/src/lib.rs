//! Experiment runner around the `phase_ensemble` library: config parsing,
//! experiment orchestration, and reproducible artifacts on disk.

pub mod builders;
pub mod config;
pub mod experiments;
pub mod output;

use std::fmt;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use config::{ConfigErrors, ExperimentConfig};
use experiments::ExperimentOutput;
use output::{atomic_write, summary_csv, Manifest};

/// Operational failures. Tolerance failures are not errors; they surface as
/// `pass = false` rows and exit code 2.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration (exit 1).
    Config(ConfigErrors),
    /// Library-level failure (exit 1).
    Core(phase_ensemble::Error),
    /// I/O or orchestration failure (exit 1).
    Run(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(errors) => write!(f, "config error:\n{errors}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Run(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<phase_ensemble::Error> for CliError {
    fn from(e: phase_ensemble::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<ConfigErrors> for CliError {
    fn from(e: ConfigErrors) -> Self {
        CliError::Config(e)
    }
}

/// Result of a complete run, after artifacts have been written.
pub struct RunReport {
    pub output: ExperimentOutput,
    pub all_pass: bool,
}

/// Runs the experiment and writes `summary.csv`, `shots.jsonl` (when shots
/// were logged), `manifest.txt`, and any per-experiment auxiliary files into
/// the config's output directory. Every write is atomic.
pub fn run_to_disk(config: &ExperimentConfig) -> Result<RunReport, CliError> {
    let started_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let clock = Instant::now();
    let output = experiments::execute(config)?;
    let wall_clock_secs = clock.elapsed().as_secs_f64();

    let dir = &config.out_dir;
    let write = |name: &str, content: &str| -> Result<(), CliError> {
        let path: &Path = dir.as_ref();
        atomic_write(&path.join(name), content)
            .map_err(|e| CliError::Run(format!("cannot write {}/{name}: {e}", dir.display())))
    };

    write("summary.csv", &summary_csv(&output.rows))?;
    if !output.shot_log.is_empty() {
        let mut jsonl = output.shot_log.join("\n");
        jsonl.push('\n');
        write("shots.jsonl", &jsonl)?;
    }
    for (name, content) in &output.aux {
        write(name, content)?;
    }

    let manifest = Manifest {
        experiment: config.experiment.as_str().into(),
        config_echo: config.echo.clone(),
        started_unix,
        wall_clock_secs,
        summary_lines: output.rows.iter().map(|r| r.csv_line()).collect(),
        notes: output.notes.clone(),
    };
    write("manifest.txt", &manifest.render())?;

    let all_pass = output.all_pass();
    Ok(RunReport { output, all_pass })
}
