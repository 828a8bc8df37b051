//! The phase-ensemble measurement model.
//!
//! Each energy mode of a system is periodic with period `tau_n = 2*pi/E_n`,
//! so an unknown absolute start time only enters a measurement through
//! per-mode residues. A single shot is the measurement functional
//!
//! ```text
//! S = sum_l  conj(c_l) (A c)_l  exp(-i dt''_l E_l)
//! ```
//!
//! whose per-mode phases are drawn either from the product measure over
//! residues (outer uniform over `dt_i` in `[-tau/2, tau/2)`, inner uniform
//! over the signed interval from 0 to `dt_i`) or from one uniformly drawn
//! absolute start time. Under the product measure every phase averages to
//! the sinc constant `kappa = Si(pi)/pi`, so `mean / kappa` recovers the
//! Born expectation.

mod weyl;

pub use weyl::{ks_statistic_uniform, weyl_uniformity};

use num_complex::Complex64;
use serde::Serialize;

use crate::born::{born_expectation, Observable};
use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, compensated_sum_f64, sinc_kappa, RngStream};
use crate::spectral::{SpectralSystem, StateVector};

/// Minimum sampling window for the absolute-time sampler, in units of the
/// largest mode period. Below this, residue equidistribution is unreliable.
pub const MIN_WINDOW_PERIODS: f64 = 1e3;

/// Which measure a phase sample was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerTag {
    /// Independent per-mode residues under the double-integral measure.
    PaperMeasure,
    /// All residues derived from one uniformly drawn absolute start time.
    AbsoluteTime,
}

impl SamplerTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            SamplerTag::PaperMeasure => "paper",
            SamplerTag::AbsoluteTime => "absolute",
        }
    }
}

impl std::str::FromStr for SamplerTag {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "paper" | "paper_measure" => Ok(SamplerTag::PaperMeasure),
            "absolute" | "absolute_time" => Ok(SamplerTag::AbsoluteTime),
            other => Err(format!("unknown sampler {other:?} (expected paper|absolute)")),
        }
    }
}

impl std::fmt::Display for SamplerTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Splits `t` into `alpha * period + dt` with `dt` in `[-period/2, period/2)`.
///
/// The residual is formed with a fused multiply-add, so `alpha * period + dt`
/// reconstructs `t` to within one rounding even for `|t|` a billion periods.
pub fn residue_decompose(t: f64, period: f64) -> Result<(i64, f64)> {
    if !(period > 0.0) {
        return Err(Error::NonPositivePeriod { period });
    }
    let mut alpha = (t / period + 0.5).floor();
    let mut dt = f64::mul_add(-alpha, period, t);
    // Rounding in t/period can misplace the residue by one period.
    if dt < -0.5 * period {
        alpha -= 1.0;
        dt += period;
    } else if dt >= 0.5 * period {
        alpha += 1.0;
        dt -= period;
    }
    Ok((alpha as i64, dt))
}

/// One draw of per-mode residues and the unit phases they induce.
///
/// Degenerate modes (as flagged by the system) always carry identical
/// residues and phases: equal periods force equal residues of any one
/// underlying time.
#[derive(Debug, Clone)]
pub struct PhaseSample {
    dt_i: Vec<f64>,
    dt_e2: Vec<f64>,
    phases: Vec<Complex64>,
    tag: SamplerTag,
    t_e: f64,
}

impl PhaseSample {
    pub fn modes(&self) -> usize {
        self.phases.len()
    }

    pub fn tag(&self) -> SamplerTag {
        self.tag
    }

    pub fn t_e(&self) -> f64 {
        self.t_e
    }

    /// Residues of the start time modulo each mode period, in
    /// `[-tau_n/2, tau_n/2)`.
    pub fn dt_i(&self) -> &[f64] {
        &self.dt_i
    }

    /// The phase-generating residues `dt''_n`.
    pub fn dt_e2(&self) -> &[f64] {
        &self.dt_e2
    }

    /// Unit phases `exp(-i dt''_n E_n)`.
    pub fn phases(&self) -> &[Complex64] {
        &self.phases
    }

    /// Checks the per-mode residues against their admissible intervals:
    /// `|dt''| <= |dt_i| <= tau/2` for the paper measure, `0 <= dt'' < tau`
    /// for absolute time.
    pub fn admissible_for(&self, system: &SpectralSystem) -> bool {
        if self.modes() != system.dim() {
            return false;
        }
        (0..self.modes()).all(|n| {
            let tau = system.period(system.degeneracy_reps()[n]);
            match self.tag {
                SamplerTag::PaperMeasure => {
                    self.dt_e2[n].abs() <= self.dt_i[n].abs() && self.dt_i[n].abs() <= 0.5 * tau
                }
                SamplerTag::AbsoluteTime => (0.0..tau).contains(&self.dt_e2[n]),
            }
        })
    }

    fn check_for(&self, system: &SpectralSystem) -> Result<()> {
        if self.modes() != system.dim() {
            return Err(Error::StaleSample {
                sample_modes: self.modes(),
                system_modes: system.dim(),
            });
        }
        Ok(())
    }
}

/// Per-shot RNG stream convention: mode `n` of shot `s` in a `d`-mode system
/// draws from `stream_id = s * d + n`. Degenerate modes use the stream of
/// their group representative, which keeps sampling independent of worker
/// order and shot evaluation order.
fn mode_stream(seed: u64, shot_index: u64, dim: usize, mode: usize) -> RngStream {
    RngStream::new(seed, shot_index * dim as u64 + mode as u64)
}

fn paper_sample_kernel(
    seed: u64,
    shot_index: u64,
    system: &SpectralSystem,
    t_e: f64,
    deterministic_regime: bool,
) -> PhaseSample {
    let dim = system.dim();
    let mut dt_i = vec![0.0; dim];
    let mut dt_e2 = vec![0.0; dim];
    let mut phases = vec![Complex64::new(1.0, 0.0); dim];
    for n in 0..dim {
        let rep = system.degeneracy_reps()[n];
        if rep != n {
            dt_i[n] = dt_i[rep];
            dt_e2[n] = dt_e2[rep];
            phases[n] = phases[rep];
            continue;
        }
        let tau = system.period(n);
        let mut rng = mode_stream(seed, shot_index, dim, n);
        let u_outer = rng.next_unit();
        let u_inner = rng.next_unit();
        let dti = (u_outer - 0.5) * tau;
        // Inner interval runs from 0 to dt_i (signed). The deterministic-regime
        // switch additionally caps its length at t_e; for t_e >= |dt_i| the cap
        // reproduces the unconstrained draw bit for bit.
        let span = if deterministic_regime {
            dti.signum() * dti.abs().min(t_e)
        } else {
            dti
        };
        let dte2 = span * u_inner;
        dt_i[n] = dti;
        dt_e2[n] = dte2;
        phases[n] = Complex64::from_polar(1.0, -dte2 * system.energy(n));
    }
    PhaseSample {
        dt_i,
        dt_e2,
        phases,
        tag: SamplerTag::PaperMeasure,
        t_e,
    }
}

fn absolute_sample_kernel(
    seed: u64,
    shot_index: u64,
    system: &SpectralSystem,
    t_e: f64,
    window: f64,
) -> PhaseSample {
    let dim = system.dim();
    // One absolute start time per shot, drawn from the mode-0 stream slot.
    let mut rng = mode_stream(seed, shot_index, dim, 0);
    let t_i = window * rng.next_unit();
    absolute_residues(t_i, system, t_e)
}

fn absolute_residues(t_i: f64, system: &SpectralSystem, t_e: f64) -> PhaseSample {
    let dim = system.dim();
    let t_f = t_i + t_e;
    let mut dt_i = vec![0.0; dim];
    let mut dt_e2 = vec![0.0; dim];
    let mut phases = vec![Complex64::new(1.0, 0.0); dim];
    for n in 0..dim {
        let rep = system.degeneracy_reps()[n];
        if rep != n {
            dt_i[n] = dt_i[rep];
            dt_e2[n] = dt_e2[rep];
            phases[n] = phases[rep];
            continue;
        }
        let tau = system.period(n);
        let (_alpha, dti) = residue_decompose(t_i, tau).expect("period is positive");
        let mut dte2 = t_f.rem_euclid(tau);
        if dte2 >= tau {
            dte2 -= tau; // rem_euclid can round onto the modulus
        }
        dt_i[n] = dti;
        dt_e2[n] = dte2;
        phases[n] = Complex64::from_polar(1.0, -dte2 * system.energy(n));
    }
    PhaseSample {
        dt_i,
        dt_e2,
        phases,
        tag: SamplerTag::AbsoluteTime,
        t_e,
    }
}

/// Deterministic variant of [`sample_absolute_time`]: derives every mode's
/// residues from an explicitly given start time instead of a random draw.
pub fn sample_absolute_time_at(
    t_i: f64,
    system: &SpectralSystem,
    t_e: f64,
) -> Result<PhaseSample> {
    if t_e < 0.0 {
        return Err(Error::NegativeDuration { t_e });
    }
    if !t_i.is_finite() {
        return Err(Error::NonFiniteEntry);
    }
    Ok(absolute_residues(t_i, system, t_e))
}

/// Draws per-mode residues under the product measure: `dt_i` uniform on
/// `[-tau_n/2, tau_n/2)`, then `dt''` uniform on the signed interval from 0
/// to `dt_i`. With `deterministic_regime`, the inner interval is clamped to
/// length at most `t_e` (active only while `t_e < |dt_i|`).
///
/// `rng` supplies the stream for mode 0 of this shot; mode `n` draws from
/// `stream_id + n`, degenerate groups from their representative's stream.
pub fn sample_paper_measure(
    rng: &RngStream,
    system: &SpectralSystem,
    t_e: f64,
    deterministic_regime: bool,
) -> Result<PhaseSample> {
    if t_e < 0.0 {
        return Err(Error::NegativeDuration { t_e });
    }
    let dim = system.dim() as u64;
    let shot_index = rng.stream_id() / dim.max(1);
    Ok(paper_sample_kernel(
        rng.seed(),
        shot_index,
        system,
        t_e,
        deterministic_regime,
    ))
}

/// Draws one absolute start time uniformly from `[0, window)` and derives
/// every mode's residues from it: `dt_i = t_i mod tau_n` (symmetric range)
/// and `dt'' = (t_i + t_e) mod tau_n`.
pub fn sample_absolute_time(
    rng: &RngStream,
    system: &SpectralSystem,
    t_e: f64,
    window: f64,
) -> Result<PhaseSample> {
    if t_e < 0.0 {
        return Err(Error::NegativeDuration { t_e });
    }
    let required = MIN_WINDOW_PERIODS * system.max_period();
    if !(window >= required) {
        return Err(Error::WindowTooSmall { window, required });
    }
    let dim = system.dim() as u64;
    let shot_index = rng.stream_id() / dim.max(1);
    Ok(absolute_sample_kernel(rng.seed(), shot_index, system, t_e, window))
}

/// Per-mode weights of the single-shot functional for a fixed state and
/// observable: `w_l = conj(c_l) (A c)_l`, so a shot is `sum_l w_l phase_l`
/// and the weights sum to the Born expectation.
#[derive(Debug, Clone)]
pub struct ShotWeights {
    weights: Vec<Complex64>,
}

impl ShotWeights {
    pub fn new(state: &StateVector, obs: &Observable) -> Result<Self> {
        if state.dim() != obs.dim() {
            return Err(Error::DimensionMismatch {
                left: state.dim(),
                right: obs.dim(),
            });
        }
        let image = obs.matrix().mul_vec(state.amplitudes())?;
        let weights = state
            .amplitudes()
            .iter()
            .zip(image.iter())
            .map(|(c, y)| c.conj() * y)
            .collect();
        Ok(Self { weights })
    }

    pub fn modes(&self) -> usize {
        self.weights.len()
    }

    /// `sum_l w_l` — equals the Born expectation by completeness.
    pub fn total(&self) -> Complex64 {
        self.weights.iter().sum()
    }

    fn evaluate_unchecked(&self, sample: &PhaseSample) -> Complex64 {
        self.weights
            .iter()
            .zip(sample.phases().iter())
            .map(|(w, p)| w * p)
            .sum()
    }

    pub fn evaluate(&self, sample: &PhaseSample) -> Result<Complex64> {
        if sample.modes() != self.modes() {
            return Err(Error::StaleSample {
                sample_modes: sample.modes(),
                system_modes: self.modes(),
            });
        }
        Ok(self.evaluate_unchecked(sample))
    }
}

/// One evaluation of the single-shot measurement functional.
///
/// With every phase equal to 1 this collapses to the Born expectation; an
/// energy eigenstate collapses to `phase_j * A_jj`.
pub fn single_shot(
    system: &SpectralSystem,
    state: &StateVector,
    obs: &Observable,
    sample: &PhaseSample,
) -> Result<Complex64> {
    if system.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            left: system.dim(),
            right: state.dim(),
        });
    }
    sample.check_for(system)?;
    ShotWeights::new(state, obs)?.evaluate(sample)
}

/// Analytic expectation of a single shot under the paper measure:
/// `kappa * sum_m conj(b_m) a_m b_m = kappa * <A>`.
///
/// Computed through the outcome-basis route, deliberately not through the
/// matrix quadratic form, so comparisons against [`born_expectation`] cross
/// two independent algebraic paths.
pub fn closed_form_average(
    system: &SpectralSystem,
    state: &StateVector,
    obs: &Observable,
) -> Result<Complex64> {
    if system.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            left: system.dim(),
            right: state.dim(),
        });
    }
    let coeffs = obs.outcome_coefficients(state)?;
    let spectral_sum: Complex64 = coeffs
        .iter()
        .zip(obs.eigenvalues().iter())
        .map(|(b, &a)| b.conj() * a * b)
        .sum();
    Ok(spectral_sum * sinc_kappa())
}

/// One recorded shot of an ensemble run.
#[derive(Debug, Clone)]
pub struct ShotRecord {
    pub shot_index: u64,
    pub value: Complex64,
    pub sampler: SamplerTag,
    pub t_e: f64,
    pub seed: u64,
}

#[derive(Serialize)]
struct ShotLine<'a> {
    shot_index: u64,
    re: f64,
    im: f64,
    sampler: &'a str,
    t_e: f64,
    seed: u64,
}

impl ShotRecord {
    /// One JSON object per line for the shot log.
    pub fn json_line(&self) -> String {
        serde_json::to_string(&ShotLine {
            shot_index: self.shot_index,
            re: self.value.re,
            im: self.value.im,
            sampler: self.sampler.as_str(),
            t_e: self.t_e,
            seed: self.seed,
        })
        .expect("shot record serializes")
    }
}

/// Running statistics of complex shot values.
///
/// The mean uses the fixed-tree compensated sum; the variance uses the
/// shifted two-pass form around the first shot, which returns exactly zero
/// for a constant sample. `stderr = sqrt(variance / count)`; with a single
/// shot the standard error is undefined and reported as 0 with
/// `stderr_defined = false`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub count: usize,
    pub mean: Complex64,
    pub variance: f64,
    pub stderr: f64,
    pub stderr_defined: bool,
}

impl EnsembleStats {
    pub fn from_values(values: &[Complex64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        let n = values.len() as f64;
        let mean = compensated_sum(values) * (1.0 / n);
        if values.len() == 1 {
            return Ok(Self {
                count: 1,
                mean,
                variance: 0.0,
                stderr: 0.0,
                stderr_defined: false,
            });
        }
        // Shifted two-pass variance around the first value: exact when every
        // shot is identical, and the shift keeps the cancellation benign.
        let pivot = values[0];
        let centered: Vec<Complex64> = values.iter().map(|v| v - pivot).collect();
        let sum_centered = compensated_sum(&centered);
        let sum_sqr: Vec<f64> = centered.iter().map(|v| v.norm_sqr()).collect();
        let q = compensated_sum_f64(&sum_sqr);
        let variance = ((q - sum_centered.norm_sqr() / n) / (n - 1.0)).max(0.0);
        let stderr = (variance / n).sqrt();
        Ok(Self {
            count: values.len(),
            mean,
            variance,
            stderr,
            stderr_defined: true,
        })
    }
}

/// Knobs for [`run_ensemble`].
#[derive(Debug, Clone)]
pub struct EnsembleOptions {
    pub sampler: SamplerTag,
    pub t_e: f64,
    pub n_shots: usize,
    pub seed: u64,
    /// Absolute-time sampling window; ignored by the paper measure.
    pub window: f64,
    /// Clamp `|dt''| <= t_e` (paper measure only).
    pub deterministic_regime: bool,
    /// Worker threads; 0 and 1 both mean sequential. Results are
    /// bit-identical for every worker count.
    pub workers: usize,
    pub keep_shot_log: bool,
}

impl Default for EnsembleOptions {
    fn default() -> Self {
        Self {
            sampler: SamplerTag::PaperMeasure,
            t_e: 1.0,
            n_shots: 1000,
            seed: 0,
            window: 0.0,
            deterministic_regime: false,
            workers: 1,
            keep_shot_log: false,
        }
    }
}

/// Result of an ensemble run: statistics, the sinc constant, and the
/// renormalized estimate `mean / kappa` that the Born oracle is compared to.
#[derive(Debug, Clone)]
pub struct EnsembleRun {
    pub stats: EnsembleStats,
    pub kappa: f64,
    pub renormalized: Complex64,
    pub born: f64,
    pub shots: Option<Vec<ShotRecord>>,
}

#[derive(Serialize)]
struct SummaryLine {
    count: usize,
    re_mean: f64,
    im_mean: f64,
    stderr: f64,
    kappa: f64,
    renormalized: f64,
    born_oracle: f64,
}

impl EnsembleRun {
    /// Final JSONL record appended after the shot records.
    pub fn summary_json_line(&self) -> String {
        serde_json::to_string(&SummaryLine {
            count: self.stats.count,
            re_mean: self.stats.mean.re,
            im_mean: self.stats.mean.im,
            stderr: self.stats.stderr,
            kappa: self.kappa,
            renormalized: self.renormalized.re,
            born_oracle: self.born,
        })
        .expect("summary serializes")
    }

    /// `|renormalized - born|` for the Born comparison.
    pub fn abs_error(&self) -> f64 {
        (self.renormalized - Complex64::new(self.born, 0.0)).norm()
    }
}

/// Runs `n_shots` independent single shots and aggregates them.
///
/// Shot `s` draws from RNG streams `s * dim + mode`, and the reduction is a
/// fixed-tree compensated sum over shot index, so the result is bit-identical
/// for any worker count.
pub fn run_ensemble(
    system: &SpectralSystem,
    state: &StateVector,
    obs: &Observable,
    options: &EnsembleOptions,
) -> Result<EnsembleRun> {
    if options.n_shots == 0 {
        return Err(Error::EmptyEnsemble);
    }
    if options.t_e < 0.0 {
        return Err(Error::NegativeDuration { t_e: options.t_e });
    }
    if system.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            left: system.dim(),
            right: state.dim(),
        });
    }
    if options.sampler == SamplerTag::AbsoluteTime {
        let required = MIN_WINDOW_PERIODS * system.max_period();
        if !(options.window >= required) {
            return Err(Error::WindowTooSmall {
                window: options.window,
                required,
            });
        }
    }

    let weights = ShotWeights::new(state, obs)?;
    let born = born_expectation(state, obs)?;

    let shot_value = |s: usize| -> Complex64 {
        let sample = match options.sampler {
            SamplerTag::PaperMeasure => paper_sample_kernel(
                options.seed,
                s as u64,
                system,
                options.t_e,
                options.deterministic_regime,
            ),
            SamplerTag::AbsoluteTime => {
                absolute_sample_kernel(options.seed, s as u64, system, options.t_e, options.window)
            }
        };
        weights.evaluate_unchecked(&sample)
    };

    let values: Vec<Complex64> = if options.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.workers)
            .build()
            .map_err(|e| Error::WorkerPool {
                message: e.to_string(),
            })?;
        pool.install(|| {
            use rayon::prelude::*;
            (0..options.n_shots).into_par_iter().map(shot_value).collect()
        })
    } else {
        (0..options.n_shots).map(shot_value).collect()
    };

    let stats = EnsembleStats::from_values(&values)?;
    let kappa = sinc_kappa();
    let renormalized = stats.mean * (1.0 / kappa);
    let shots = options.keep_shot_log.then(|| {
        values
            .iter()
            .enumerate()
            .map(|(s, &value)| ShotRecord {
                shot_index: s as u64,
                value,
                sampler: options.sampler,
                t_e: options.t_e,
                seed: options.seed,
            })
            .collect()
    });

    Ok(EnsembleRun {
        stats,
        kappa,
        renormalized,
        born,
        shots,
    })
}

/// One row of a deterministic-regime scan.
#[derive(Debug, Clone)]
pub struct ScanPoint {
    pub t_e: f64,
    pub t_e_over_min_period: f64,
    pub variance: f64,
    pub stats: EnsembleStats,
}

/// Scans single-shot variance over experiment durations with the
/// deterministic-regime clamp enabled. The same seed is reused at every
/// duration (common random numbers), so the scan is monotone pathwise.
pub fn variance_scan(
    system: &SpectralSystem,
    state: &StateVector,
    obs: &Observable,
    t_e_list: &[f64],
    n_shots: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<ScanPoint>> {
    if t_e_list.is_empty()
        || t_e_list.iter().any(|t| !t.is_finite() || *t < 0.0)
        || t_e_list.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::BadScanGrid);
    }
    let min_period = system.min_period();
    t_e_list
        .iter()
        .map(|&t_e| {
            let options = EnsembleOptions {
                sampler: SamplerTag::PaperMeasure,
                t_e,
                n_shots,
                seed,
                deterministic_regime: true,
                workers,
                ..EnsembleOptions::default()
            };
            let run = run_ensemble(system, state, obs, &options)?;
            Ok(ScanPoint {
                t_e,
                t_e_over_min_period: t_e / min_period,
                variance: run.stats.variance,
                stats: run.stats,
            })
        })
        .collect()
}
