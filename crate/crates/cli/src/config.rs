//! Flat `key = value` experiment configuration.
//!
//! The parser reports every problem it finds, each with the line it came
//! from (line 0 marks file-level issues like missing required keys). Unknown
//! keys are rejected rather than ignored.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use phase_ensemble::ensemble::SamplerTag;

/// Which experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Kappa,
    BornCheck,
    SamplerCompare,
    WeylTest,
    TeScan,
    FreeParticle,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Kappa,
        ExperimentKind::BornCheck,
        ExperimentKind::SamplerCompare,
        ExperimentKind::WeylTest,
        ExperimentKind::TeScan,
        ExperimentKind::FreeParticle,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Kappa => "kappa",
            ExperimentKind::BornCheck => "born-check",
            ExperimentKind::SamplerCompare => "sampler-compare",
            ExperimentKind::WeylTest => "weyl-test",
            ExperimentKind::TeScan => "te-scan",
            ExperimentKind::FreeParticle => "free-particle",
        }
    }

    /// Keys that must be present for this experiment.
    fn required_keys(&self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Kappa => &[],
            ExperimentKind::BornCheck | ExperimentKind::SamplerCompare => {
                &["system", "state", "observable", "t_e", "n_shots", "seed"]
            }
            ExperimentKind::WeylTest => &["system", "n_shots", "seed"],
            ExperimentKind::TeScan => {
                &["system", "state", "observable", "t_e_list", "n_shots", "seed"]
            }
            ExperimentKind::FreeParticle => {
                &["lattice", "state", "t_e", "n_shots", "seed", "energy_offset"]
            }
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        ExperimentKind::ALL
            .iter()
            .find(|k| k.as_str() == s)
            .copied()
            .ok_or_else(|| {
                let names: Vec<&str> = ExperimentKind::ALL.iter().map(|k| k.as_str()).collect();
                format!("unknown experiment {s:?} (expected one of {})", names.join(", "))
            })
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where the spectral system comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum SystemSpec {
    /// Diagonal two-level system with E = (1, 2).
    TwoLevel,
    /// Three incommensurate modes E = (1, sqrt(2), sqrt(3)).
    Incommensurate3,
    /// Hermitian Hamiltonian from `M row col re im` records.
    MatrixFile(PathBuf),
    /// Spectral data from `E`/`V` records.
    SpectralFile(PathBuf),
}

impl FromStr for SystemSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once(':') {
            None if s == "twolevel" => Ok(SystemSpec::TwoLevel),
            None if s == "incommensurate3" => Ok(SystemSpec::Incommensurate3),
            Some(("matrix", path)) if !path.is_empty() => Ok(SystemSpec::MatrixFile(path.into())),
            Some(("spectral", path)) if !path.is_empty() => {
                Ok(SystemSpec::SpectralFile(path.into()))
            }
            _ => Err(format!(
                "invalid system {s:?} (expected twolevel, incommensurate3, matrix:<path> or spectral:<path>)"
            )),
        }
    }
}

/// Lattice geometry `n_sites,length,mass`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    pub n_sites: usize,
    pub length: f64,
    pub mass: f64,
}

impl FromStr for LatticeSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [n, l, m] = parts.as_slice() else {
            return Err(format!("invalid lattice {s:?} (expected n_sites,length,mass)"));
        };
        Ok(LatticeSpec {
            n_sites: n.parse().map_err(|_| format!("invalid n_sites {n:?}"))?,
            length: l.parse().map_err(|_| format!("invalid length {l:?}"))?,
            mass: m.parse().map_err(|_| format!("invalid mass {m:?}"))?,
        })
    }
}

/// Where the initial state comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// Two-level coefficients (sqrt(0.8), sqrt(0.2)).
    Born08,
    /// Uniform superposition over all modes.
    Uniform,
    /// Energy eigenstate `k`.
    Basis(usize),
    /// Explicit coefficients `re,im;re,im;...`, normalized on load.
    Amps(Vec<Complex64>),
    /// `C` records from a file.
    File(PathBuf),
    /// Lattice point mass at a site.
    Delta(usize),
    /// Lattice Gaussian packet `center,width,momentum`.
    Packet { center: f64, width: f64, momentum: f64 },
}

impl FromStr for StateSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once(':') {
            None if s == "born08" => Ok(StateSpec::Born08),
            None if s == "uniform" => Ok(StateSpec::Uniform),
            Some(("basis", k)) => Ok(StateSpec::Basis(
                k.parse().map_err(|_| format!("invalid basis index {k:?}"))?,
            )),
            Some(("amps", list)) => {
                let mut amps = Vec::new();
                for pair in list.split(';') {
                    let Some((re, im)) = pair.split_once(',') else {
                        return Err(format!("invalid amplitude pair {pair:?} (expected re,im)"));
                    };
                    amps.push(Complex64::new(
                        re.trim().parse().map_err(|_| format!("invalid re {re:?}"))?,
                        im.trim().parse().map_err(|_| format!("invalid im {im:?}"))?,
                    ));
                }
                if amps.is_empty() {
                    return Err("amps: needs at least one re,im pair".into());
                }
                Ok(StateSpec::Amps(amps))
            }
            Some(("file", path)) if !path.is_empty() => Ok(StateSpec::File(path.into())),
            Some(("delta", site)) => Ok(StateSpec::Delta(
                site.parse().map_err(|_| format!("invalid site {site:?}"))?,
            )),
            Some(("packet", rest)) => {
                let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
                let [center, width, momentum] = parts.as_slice() else {
                    return Err(format!(
                        "invalid packet {rest:?} (expected center,width,momentum)"
                    ));
                };
                Ok(StateSpec::Packet {
                    center: center.parse().map_err(|_| format!("invalid center {center:?}"))?,
                    width: width.parse().map_err(|_| format!("invalid width {width:?}"))?,
                    momentum: momentum
                        .parse()
                        .map_err(|_| format!("invalid momentum {momentum:?}"))?,
                })
            }
            _ => Err(format!(
                "invalid state {s:?} (expected born08, uniform, basis:<k>, amps:<re,im;...>, file:<path>, delta:<site> or packet:<c,w,q>)"
            )),
        }
    }
}

/// Which observable to measure.
#[derive(Debug, Clone, PartialEq)]
pub enum ObservableSpec {
    /// Two-level `[[0,1],[1,0]]`: outcomes +-1 in the (1,+-1)/sqrt(2) basis.
    PmOne,
    Identity,
    /// The Hamiltonian itself (diagonal in the energy basis).
    Hamiltonian,
    /// Hermitian matrix (energy basis) from `M row col re im` records.
    MatrixFile(PathBuf),
    /// Lattice position operator.
    Position,
    /// Lattice momentum operator.
    Momentum,
}

impl FromStr for ObservableSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once(':') {
            None if s == "pm1" => Ok(ObservableSpec::PmOne),
            None if s == "identity" => Ok(ObservableSpec::Identity),
            None if s == "hamiltonian" => Ok(ObservableSpec::Hamiltonian),
            None if s == "position" => Ok(ObservableSpec::Position),
            None if s == "momentum" => Ok(ObservableSpec::Momentum),
            Some(("matrix", path)) if !path.is_empty() => {
                Ok(ObservableSpec::MatrixFile(path.into()))
            }
            _ => Err(format!(
                "invalid observable {s:?} (expected pm1, identity, hamiltonian, position, momentum or matrix:<path>)"
            )),
        }
    }
}

/// One problem found while parsing or validating a config.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigIssue {
    /// 1-based source line; 0 for file-level issues.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Every error found in a config, never just the first.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<ConfigIssue>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

/// Fully validated experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub system: Option<SystemSpec>,
    pub lattice: Option<LatticeSpec>,
    pub state: Option<StateSpec>,
    pub observable: Option<ObservableSpec>,
    pub t_e: f64,
    pub t_e_list: Vec<f64>,
    pub n_shots: usize,
    pub seed: u64,
    pub sampler: SamplerTag,
    /// Absolute-time window in units of the largest mode period.
    pub window_periods: f64,
    pub deterministic_regime: bool,
    pub energy_offset: f64,
    pub workers: usize,
    pub out_dir: PathBuf,
    pub shot_log: bool,
    pub fft_bench: bool,
    /// Verbatim `key = value` lines as resolved (config plus overrides),
    /// echoed into the manifest.
    pub echo: String,
}

pub const KNOWN_KEYS: [&str; 16] = [
    "experiment",
    "system",
    "lattice",
    "state",
    "observable",
    "t_e",
    "t_e_list",
    "n_shots",
    "seed",
    "sampler",
    "window",
    "deterministic_regime_constraint",
    "energy_offset",
    "workers",
    "out",
    "shot_log",
];

const HIDDEN_KEYS: [&str; 1] = ["fft_bench"];

/// Raw `key = value` pairs with their source lines.
#[derive(Debug, Default, Clone)]
pub struct RawConfig {
    entries: BTreeMap<String, (usize, String)>,
}

impl RawConfig {
    /// First parse stage: line syntax, known keys, duplicates. Never bails
    /// early — returns whatever parsed plus every issue found, so later
    /// stages can report their errors alongside these.
    pub fn from_text(text: &str) -> (Self, Vec<ConfigIssue>) {
        let mut issues = Vec::new();
        let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw_line.split_once('#') {
                Some((before, _comment)) => before,
                None => raw_line,
            };
            let trimmed = content.trim();
            if trimmed.is_empty() {
                continue;
            }
            let Some((key, value)) = trimmed.split_once('=') else {
                issues.push(ConfigIssue {
                    line,
                    message: format!("expected `key = value`, got {trimmed:?}"),
                });
                continue;
            };
            let key = key.trim();
            let value = value.trim();
            if !KNOWN_KEYS.contains(&key) && !HIDDEN_KEYS.contains(&key) {
                issues.push(ConfigIssue {
                    line,
                    message: format!("unknown key {key:?}"),
                });
                continue;
            }
            if value.is_empty() {
                issues.push(ConfigIssue {
                    line,
                    message: format!("key {key:?} has an empty value"),
                });
                continue;
            }
            if let Some((prev_line, _)) = entries.get(key) {
                issues.push(ConfigIssue {
                    line,
                    message: format!("duplicate key {key:?} (first set on line {prev_line})"),
                });
                continue;
            }
            entries.insert(key.to_string(), (line, value.to_string()));
        }
        (Self { entries }, issues)
    }

    /// Applies a command-line override (reported as line 0).
    pub fn set_override(&mut self, key: &str, value: String) {
        self.entries.insert(key.to_string(), (0, value));
    }

    pub fn get(&self, key: &str) -> Option<&(usize, String)> {
        self.entries.get(key)
    }

    fn echo(&self) -> String {
        self.entries
            .iter()
            .map(|(k, (_line, v))| format!("{k} = {v}\n"))
            .collect()
    }
}

fn typed<T: FromStr>(
    raw: &RawConfig,
    key: &str,
    issues: &mut Vec<ConfigIssue>,
) -> Option<T>
where
    T::Err: fmt::Display,
{
    let (line, value) = raw.get(key)?;
    match value.parse::<T>() {
        Ok(v) => Some(v),
        Err(e) => {
            issues.push(ConfigIssue {
                line: *line,
                message: format!("{key}: {e}"),
            });
            None
        }
    }
}

fn typed_f64(raw: &RawConfig, key: &str, issues: &mut Vec<ConfigIssue>) -> Option<f64> {
    let (line, value) = raw.get(key)?;
    match value.parse::<f64>() {
        Ok(v) if v.is_finite() => Some(v),
        _ => {
            issues.push(ConfigIssue {
                line: *line,
                message: format!("{key}: expected a finite number, got {value:?}"),
            });
            None
        }
    }
}

fn typed_bool(raw: &RawConfig, key: &str, issues: &mut Vec<ConfigIssue>) -> Option<bool> {
    let (line, value) = raw.get(key)?;
    match value.as_str() {
        "true" | "yes" | "on" | "1" => Some(true),
        "false" | "no" | "off" | "0" => Some(false),
        other => {
            issues.push(ConfigIssue {
                line: *line,
                message: format!("{key}: expected true/false, got {other:?}"),
            });
            None
        }
    }
}

/// Second parse stage: types, ranges, and per-experiment required keys.
/// Returns the validated config or every error found, including any issues
/// carried over from the first stage.
pub fn validate(
    raw: &RawConfig,
    carried: Vec<ConfigIssue>,
) -> Result<ExperimentConfig, ConfigErrors> {
    let mut issues: Vec<ConfigIssue> = carried;

    let experiment: Option<ExperimentKind> = typed(raw, "experiment", &mut issues);
    if experiment.is_none() && raw.get("experiment").is_none() {
        issues.push(ConfigIssue {
            line: 0,
            message: "experiment missing (one of kappa, born-check, sampler-compare, weyl-test, te-scan, free-particle)".into(),
        });
    }

    let system: Option<SystemSpec> = typed(raw, "system", &mut issues);
    let lattice: Option<LatticeSpec> = typed(raw, "lattice", &mut issues);
    let state: Option<StateSpec> = typed(raw, "state", &mut issues);
    let observable: Option<ObservableSpec> = typed(raw, "observable", &mut issues);
    let t_e = typed_f64(raw, "t_e", &mut issues);
    let n_shots: Option<usize> = typed(raw, "n_shots", &mut issues);
    let seed: Option<u64> = typed(raw, "seed", &mut issues);
    let sampler: Option<SamplerTag> = typed(raw, "sampler", &mut issues);
    let window = typed_f64(raw, "window", &mut issues);
    let deterministic = typed_bool(raw, "deterministic_regime_constraint", &mut issues);
    let energy_offset = typed_f64(raw, "energy_offset", &mut issues);
    let workers: Option<usize> = typed(raw, "workers", &mut issues);
    let shot_log = typed_bool(raw, "shot_log", &mut issues);
    let fft_bench = typed_bool(raw, "fft_bench", &mut issues);
    let out_dir: Option<PathBuf> = raw.get("out").map(|(_, v)| PathBuf::from(v));

    let t_e_list: Vec<f64> = match raw.get("t_e_list") {
        None => Vec::new(),
        Some((line, value)) => {
            let mut list = Vec::new();
            let mut ok = true;
            for item in value.split(',') {
                match item.trim().parse::<f64>() {
                    Ok(v) if v.is_finite() && v >= 0.0 => list.push(v),
                    _ => {
                        issues.push(ConfigIssue {
                            line: *line,
                            message: format!("t_e_list: invalid entry {:?}", item.trim()),
                        });
                        ok = false;
                    }
                }
            }
            if ok && list.windows(2).any(|w| w[0] >= w[1]) {
                issues.push(ConfigIssue {
                    line: *line,
                    message: "t_e_list must be strictly ascending".into(),
                });
            }
            list
        }
    };

    // Range checks on present values.
    if let Some((line, _)) = raw.get("t_e") {
        if matches!(t_e, Some(v) if v < 0.0) {
            issues.push(ConfigIssue {
                line: *line,
                message: "t_e must be nonnegative".into(),
            });
        }
    }
    if let Some((line, _)) = raw.get("n_shots") {
        if matches!(n_shots, Some(0)) {
            issues.push(ConfigIssue {
                line: *line,
                message: "n_shots must be at least 1".into(),
            });
        }
    }
    if let Some((line, _)) = raw.get("window") {
        if matches!(window, Some(v) if v < 1e3) {
            issues.push(ConfigIssue {
                line: *line,
                message: "window must be at least 1e3 (units of the largest mode period)".into(),
            });
        }
    }
    if let Some((line, _)) = raw.get("workers") {
        if matches!(workers, Some(0)) {
            issues.push(ConfigIssue {
                line: *line,
                message: "workers must be at least 1".into(),
            });
        }
    }
    if let Some((line, _)) = raw.get("lattice") {
        if let Some(spec) = &lattice {
            if !spec.n_sites.is_power_of_two() || !(8..=4096).contains(&spec.n_sites) {
                issues.push(ConfigIssue {
                    line: *line,
                    message: "lattice n_sites must be a power of two in [8, 4096]".into(),
                });
            }
            if spec.length <= 0.0 || spec.mass <= 0.0 {
                issues.push(ConfigIssue {
                    line: *line,
                    message: "lattice length and mass must be positive".into(),
                });
            }
        }
    }

    // Required keys: per experiment when known, the common baseline when not.
    let required: &[&str] = match experiment {
        Some(kind) => kind.required_keys(),
        None => &["system", "state", "observable", "t_e", "n_shots", "seed"],
    };
    for key in required {
        if raw.get(key).is_none() {
            issues.push(ConfigIssue {
                line: 0,
                message: format!("required key {key:?} is missing"),
            });
        }
    }

    if !issues.is_empty() {
        return Err(ConfigErrors(issues));
    }

    Ok(ExperimentConfig {
        experiment: experiment.expect("checked above"),
        system,
        lattice,
        state,
        observable,
        t_e: t_e.unwrap_or(0.0),
        t_e_list,
        n_shots: n_shots.unwrap_or(1),
        seed: seed.unwrap_or(0),
        sampler: sampler.unwrap_or(SamplerTag::PaperMeasure),
        window_periods: window.unwrap_or(1e6),
        deterministic_regime: deterministic.unwrap_or(false),
        energy_offset: energy_offset.unwrap_or(0.0),
        workers: workers.unwrap_or(1),
        out_dir: out_dir.unwrap_or_else(|| PathBuf::from(".")),
        shot_log: shot_log.unwrap_or(true),
        fft_bench: fft_bench.unwrap_or(false),
        echo: raw.echo(),
    })
}

/// One-call parse of config text (no overrides).
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigErrors> {
    let (raw, issues) = RawConfig::from_text(text);
    validate(&raw, issues)
}
