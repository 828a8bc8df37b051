//! Lattice-level oracle checks: the FFT against the naive DFT at every
//! supported test size, Parseval, and the position chain against the
//! closed-form average.

use num_complex::Complex64;
use phase_ensemble::ensemble::{closed_form_average, EnsembleOptions};
use phase_ensemble::lattice::{
    dft_forward, fft, free_particle_system, lattice_state_to_spectral, naive_dft,
    position_measurement_chain, position_observable, FftDirection, Lattice, LatticeState,
};
use phase_ensemble::numeric::RngStream;

fn random_signal(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = RngStream::new(seed, 0);
    (0..n)
        .map(|_| Complex64::new(rng.next_unit() - 0.5, rng.next_unit() - 0.5))
        .collect()
}

#[test]
fn fft_matches_naive_dft_through_512() {
    for &n in &[8usize, 16, 32, 64, 128, 256, 512] {
        let values = random_signal(n, 0x5eed + n as u64);
        for direction in [FftDirection::Forward, FftDirection::Inverse] {
            let fast = fft(&values, direction).unwrap();
            let slow = naive_dft(&values, direction).unwrap();
            let err = fast
                .iter()
                .zip(slow.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            assert!(err <= 1e-10, "n={n} {direction:?}: err {err:.3e}");
        }
    }
}

#[test]
fn parseval_across_sizes() {
    for &n in &[8usize, 64, 512, 2048] {
        let values = random_signal(n, 7 + n as u64);
        let transformed = fft(&values, FftDirection::Forward).unwrap();
        let norm_in: f64 = values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let norm_out: f64 = transformed.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((norm_in - norm_out).abs() <= 1e-11, "n={n}");
    }
}

#[test]
fn lattice_norm_is_preserved_by_the_transform() {
    let lattice = Lattice::new(64, 16.0, 1.0).unwrap();
    let state = LatticeState::gaussian_packet(&lattice, 5.0, 1.5, 2.0).unwrap();
    let momentum_rep = dft_forward(&state).unwrap();
    let n_in: f64 = state.amplitudes().iter().map(|z| z.norm_sqr()).sum();
    let n_out: f64 = momentum_rep.amplitudes().iter().map(|z| z.norm_sqr()).sum();
    assert!((n_in - n_out).abs() <= 1e-11);
}

#[test]
fn position_chain_tracks_the_closed_form_oracle() {
    let lattice = Lattice::new(64, 16.0, 1.0).unwrap();
    let q = 2.0 * std::f64::consts::TAU / lattice.length();
    let state = LatticeState::gaussian_packet(&lattice, 6.0, 1.25, q).unwrap();

    let report = position_measurement_chain(
        &state,
        &lattice,
        1.0,
        &EnsembleOptions {
            n_shots: 40_000,
            seed: 1717,
            t_e: 1.0,
            ..EnsembleOptions::default()
        },
    )
    .unwrap();
    assert!(report.pass, "chain abs_error {}", report.abs_error);
    assert!((report.born_position - 6.0).abs() <= 0.1);

    // The ensemble's raw mean also has to track the closed-form average.
    let system = free_particle_system(&lattice, 1.0).unwrap();
    let spectral = lattice_state_to_spectral(&state, &lattice, &system).unwrap();
    let obs = position_observable(&lattice, &system).unwrap();
    let closed = closed_form_average(&system, &spectral, &obs).unwrap();
    let gap = (report.run.stats.mean - closed).norm();
    assert!(
        gap <= 4.0 * report.run.stats.stderr,
        "mean {} vs closed form {closed}",
        report.run.stats.mean
    );
}
