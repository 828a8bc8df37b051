//! Kolmogorov–Smirnov uniformity checks for sampled residues.
//!
//! The absolute-time sampler relies on residues of one large uniform time
//! being equidistributed modulo every mode period (Weyl). These helpers
//! quantify how uniform the sampled residues actually are.

use crate::ensemble::PhaseSample;
use crate::error::{Error, Result};
use crate::spectral::SpectralSystem;

/// Minimum sample count for a meaningful KS statistic.
pub const MIN_KS_SAMPLES: usize = 100;

/// KS distance of `samples` from Uniform[lo, hi).
pub fn ks_statistic_uniform(samples: &[f64], lo: f64, hi: f64) -> f64 {
    assert!(hi > lo, "interval must have positive length");
    assert!(!samples.is_empty(), "need at least one sample");
    let mut sorted: Vec<f64> = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let width = hi - lo;
    let mut sup: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let cdf = ((x - lo) / width).clamp(0.0, 1.0);
        let below = i as f64 / n;
        let above = (i + 1) as f64 / n;
        sup = sup.max((cdf - below).abs()).max((above - cdf).abs());
    }
    sup
}

/// Per-mode KS distance of the `dt_i` residues against their uniform target
/// `[-tau_n/2, tau_n/2)`. Degenerate groups are evaluated on the
/// representative's period, matching how the residues were drawn.
pub fn weyl_uniformity(system: &SpectralSystem, samples: &[PhaseSample]) -> Result<Vec<f64>> {
    if samples.len() < MIN_KS_SAMPLES {
        return Err(Error::TooFewSamples {
            required: MIN_KS_SAMPLES,
            got: samples.len(),
        });
    }
    for s in samples {
        if s.modes() != system.dim() {
            return Err(Error::StaleSample {
                sample_modes: s.modes(),
                system_modes: system.dim(),
            });
        }
    }
    let mut stats = Vec::with_capacity(system.dim());
    for n in 0..system.dim() {
        let tau = system.period(system.degeneracy_reps()[n]);
        let residues: Vec<f64> = samples.iter().map(|s| s.dt_i()[n]).collect();
        stats.push(ks_statistic_uniform(&residues, -0.5 * tau, 0.5 * tau));
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::RngStream;

    #[test]
    fn degenerate_sample_has_large_distance() {
        let xs = vec![0.3; 200];
        assert!(ks_statistic_uniform(&xs, 0.0, 1.0) >= 0.5);
    }

    #[test]
    fn uniform_draws_pass() {
        let mut rng = RngStream::new(7, 1);
        let xs: Vec<f64> = (0..10_000).map(|_| rng.next_unit()).collect();
        let d = ks_statistic_uniform(&xs, 0.0, 1.0);
        assert!(d <= 0.02, "ks distance {d}");
    }

    #[test]
    fn skewed_draws_fail() {
        let mut rng = RngStream::new(7, 2);
        let xs: Vec<f64> = (0..10_000).map(|_| rng.next_unit().powi(2)).collect();
        assert!(ks_statistic_uniform(&xs, 0.0, 1.0) > 0.02);
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let sys = crate::spectral::SpectralSystem::from_spectral(
            vec![1.0],
            crate::numeric::ComplexMatrix::identity(1),
        )
        .unwrap();
        assert!(matches!(
            weyl_uniformity(&sys, &[]),
            Err(Error::TooFewSamples { .. })
        ));
    }
}
