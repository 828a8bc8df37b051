use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use phase_ensemble_cli::config::{validate, ExperimentKind, RawConfig};
use phase_ensemble_cli::{run_to_disk, CliError};

const KEY_HELP: &str = "\
Config file keys (key = value, one per line, # comments):
  experiment     kappa | born-check | sampler-compare | weyl-test | te-scan | free-particle
  system         twolevel | incommensurate3 | matrix:<path> | spectral:<path>
  lattice        <n_sites>,<length>,<mass>        (free-particle; n_sites a power of two in [8,4096])
  state          born08 | uniform | basis:<k> | amps:<re,im;re,im;...> | file:<path>
                 delta:<site> | packet:<center>,<width>,<momentum>   (lattice states)
  observable     pm1 | identity | hamiltonian | matrix:<path> | position | momentum
  t_e            experiment duration (nonnegative real)
  t_e_list       comma-separated ascending durations (te-scan)
  n_shots        shots per ensemble (>= 1)
  seed           64-bit RNG seed
  sampler        paper | absolute (default paper)
  window         absolute-time window in units of the largest mode period (>= 1e3, default 1e6)
  deterministic_regime_constraint   true|false (default false; te-scan always clamps)
  energy_offset  added to the Hamiltonian spectrum (default 0; must leave it positive)
  workers        worker threads (default 1; results are identical for any count)
  out            output directory (default .)
  shot_log       true|false, write shots.jsonl (default true)

Command-line flags override the matching config keys.
Outputs: summary.csv, shots.jsonl, manifest.txt (plus weyl.csv / te_scan.csv / fft_bench.csv).
Exit codes: 0 ok, 1 usage/config error, 2 an acceptance tolerance failed.
NO_COLOR disables ANSI colors.";

#[derive(Parser)]
#[command(
    name = "phase-ensemble",
    version,
    about = "Phase-ensemble measurement experiments against the Born oracle",
    after_help = KEY_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the sinc constant kappa and check it against its oracle value.
    Kappa(CommonArgs),
    /// Monte Carlo Born-rule recovery on a configured system.
    BornCheck(CommonArgs),
    /// Contrast the paper measure with absolute-time sampling.
    SamplerCompare(CommonArgs),
    /// KS uniformity of absolute-time residues per mode.
    WeylTest(CommonArgs),
    /// Single-shot variance versus experiment duration (clamped regime).
    TeScan(CommonArgs),
    /// Position-measurement chain for the lattice free particle.
    FreeParticle(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the key = value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config n_shots.
    #[arg(long)]
    shots: Option<usize>,
    /// Override the config output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the config worker count.
    #[arg(long)]
    workers: Option<usize>,
}

impl Command {
    fn kind(&self) -> ExperimentKind {
        match self {
            Command::Kappa(_) => ExperimentKind::Kappa,
            Command::BornCheck(_) => ExperimentKind::BornCheck,
            Command::SamplerCompare(_) => ExperimentKind::SamplerCompare,
            Command::WeylTest(_) => ExperimentKind::WeylTest,
            Command::TeScan(_) => ExperimentKind::TeScan,
            Command::FreeParticle(_) => ExperimentKind::FreeParticle,
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Kappa(a)
            | Command::BornCheck(a)
            | Command::SamplerCompare(a)
            | Command::WeylTest(a)
            | Command::TeScan(a)
            | Command::FreeParticle(a) => a,
        }
    }
}

fn paint(text: &str, code: &str) -> String {
    if std::env::var_os("NO_COLOR").is_some() {
        text.to_string()
    } else {
        format!("\x1b[{code}m{text}\x1b[0m")
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let kind = cli.command.kind();
    let args = cli.command.args();

    let (mut raw, carried) = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Run(format!("cannot read {}: {e}", path.display())))?;
            RawConfig::from_text(&text)
        }
        None => (RawConfig::default(), Vec::new()),
    };

    // The subcommand is authoritative; a conflicting config key is an error,
    // a missing one is filled in.
    match raw.get("experiment") {
        Some((line, value)) if value != kind.as_str() => {
            return Err(CliError::Run(format!(
                "config line {line} sets experiment = {value} but the {} subcommand was invoked",
                kind.as_str()
            )));
        }
        Some(_) => {}
        None => raw.set_override("experiment", kind.as_str().into()),
    }

    if let Some(seed) = args.seed {
        raw.set_override("seed", seed.to_string());
    }
    if let Some(shots) = args.shots {
        raw.set_override("n_shots", shots.to_string());
    }
    if let Some(out) = &args.out {
        raw.set_override("out", out.display().to_string());
    }
    if let Some(workers) = args.workers {
        raw.set_override("workers", workers.to_string());
    }

    let config = validate(&raw, carried)?;
    let report = run_to_disk(&config)?;

    for note in &report.output.notes {
        println!("{note}");
    }
    for row in &report.output.rows {
        let verdict = match row.pass {
            Some(true) => paint("PASS", "32"),
            Some(false) => paint("FAIL", "31"),
            None => "    ".into(),
        };
        println!("{verdict}  {}", row.csv_line());
    }
    println!(
        "wrote {}",
        config.out_dir.join("summary.csv").display()
    );
    Ok(report.all_pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => {
            eprintln!("{}", paint("one or more acceptance tolerances failed", "31"));
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("{}", paint(&format!("error: {e}"), "31"));
            ExitCode::from(1)
        }
    }
}
