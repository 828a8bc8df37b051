//! Discrete 1-D periodic free particle.
//!
//! The lattice realizes the Fourier-measurement picture in finite dimension:
//! plane waves are the energy eigenmodes of the tight-binding free-particle
//! Hamiltonian, the in-house FFT converts between position and momentum
//! representations, and the position-measurement chain runs the full
//! phase-ensemble pipeline against the Born oracle `<x>`.

mod fft;

pub use fft::{fft, fft_benchmark, naive_dft, FftBenchRow, FftDirection};

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::born::{born_expectation, Observable};
use crate::ensemble::{run_ensemble, EnsembleOptions, EnsembleRun};
use crate::error::{Error, Result};
use crate::numeric::ComplexMatrix;
use crate::spectral::{SpectralSystem, StateVector};

/// Periodic 1-D lattice for a free particle of mass `m`.
///
/// Site `j` sits at `x_j = j * spacing`; the lattice midpoint is `L/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    n_sites: usize,
    length: f64,
    mass: f64,
}

impl Lattice {
    pub fn new(n_sites: usize, length: f64, mass: f64) -> Result<Self> {
        if !n_sites.is_power_of_two() || !(8..=4096).contains(&n_sites) {
            return Err(Error::BadLatticeSize { n_sites });
        }
        if !(length > 0.0) {
            return Err(Error::BadLatticeParameter {
                name: "length",
                value: length,
            });
        }
        if !(mass > 0.0) {
            return Err(Error::BadLatticeParameter {
                name: "mass",
                value: mass,
            });
        }
        Ok(Self {
            n_sites,
            length,
            mass,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n_sites as f64
    }

    /// Coordinate of site `j`.
    pub fn site_coordinate(&self, j: usize) -> f64 {
        j as f64 * self.spacing()
    }

    /// Momentum carried by wavenumber `k` (signed into `(-N/2, N/2]`).
    pub fn momentum_of_wavenumber(&self, k: usize) -> f64 {
        let signed = signed_wavenumber(k, self.n_sites);
        TAU * signed as f64 / self.length
    }
}

fn signed_wavenumber(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Position-representation amplitudes on a lattice, normalized under the
/// discrete measure: `sum_j |psi_j|^2 * spacing = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    amplitudes: Vec<Complex64>,
}

impl LatticeState {
    /// Wraps amplitudes already normalized under the discrete measure
    /// (within 1e-10).
    pub fn new(lattice: &Lattice, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != lattice.n_sites() {
            return Err(Error::DimensionMismatch {
                left: amplitudes.len(),
                right: lattice.n_sites(),
            });
        }
        let norm_sqr = discrete_norm_sqr(&amplitudes, lattice);
        if (norm_sqr - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes arbitrary nonzero amplitudes under the discrete measure.
    pub fn normalized(lattice: &Lattice, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != lattice.n_sites() {
            return Err(Error::DimensionMismatch {
                left: amplitudes.len(),
                right: lattice.n_sites(),
            });
        }
        let norm_sqr = discrete_norm_sqr(&amplitudes, lattice);
        if norm_sqr == 0.0 || !norm_sqr.is_finite() {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let scale = 1.0 / norm_sqr.sqrt();
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z * scale).collect(),
        })
    }

    /// Point mass at one site.
    pub fn delta(lattice: &Lattice, site: usize) -> Result<Self> {
        if site >= lattice.n_sites() {
            return Err(Error::DimensionMismatch {
                left: site,
                right: lattice.n_sites(),
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); lattice.n_sites()];
        amplitudes[site] = Complex64::new(1.0 / lattice.spacing().sqrt(), 0.0);
        Ok(Self { amplitudes })
    }

    /// Gaussian-like packet centered at `center` with envelope width `width`
    /// and an imprinted phase gradient `momentum` (a plane-wave factor
    /// `exp(i * momentum * x)`). Distances wrap periodically.
    pub fn gaussian_packet(
        lattice: &Lattice,
        center: f64,
        width: f64,
        momentum: f64,
    ) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::BadLatticeParameter {
                name: "width",
                value: width,
            });
        }
        let l = lattice.length();
        let amplitudes: Vec<Complex64> = (0..lattice.n_sites())
            .map(|j| {
                let x = lattice.site_coordinate(j);
                let d = (x - center + 0.5 * l).rem_euclid(l) - 0.5 * l;
                let envelope = (-d * d / (4.0 * width * width)).exp();
                Complex64::from_polar(envelope, momentum * x)
            })
            .collect();
        Self::normalized(lattice, amplitudes)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn n_sites(&self) -> usize {
        self.amplitudes.len()
    }
}

fn discrete_norm_sqr(amplitudes: &[Complex64], lattice: &Lattice) -> f64 {
    amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>() * lattice.spacing()
}

/// Unitary forward transform of a lattice state into the momentum
/// representation (bin `k` holds wavenumber `k`).
pub fn dft_forward(state: &LatticeState) -> Result<LatticeState> {
    Ok(LatticeState {
        amplitudes: fft(state.amplitudes(), FftDirection::Forward)?,
    })
}

/// Inverse of [`dft_forward`].
pub fn dft_inverse(state: &LatticeState) -> Result<LatticeState> {
    Ok(LatticeState {
        amplitudes: fft(state.amplitudes(), FftDirection::Inverse)?,
    })
}

/// Sorted mode table of the free particle: energies ascend, and each entry
/// remembers which wavenumber it came from.
fn sorted_modes(lattice: &Lattice, energy_offset: f64) -> Vec<(usize, f64)> {
    let n = lattice.n_sites();
    let spacing = lattice.spacing();
    let prefactor = 1.0 / (lattice.mass() * spacing * spacing);
    let mut modes: Vec<(usize, f64)> = (0..n)
        .map(|k| {
            // Using the folded wavenumber makes paired energies exactly equal.
            let folded = k.min(n - k);
            let energy = prefactor * (1.0 - (TAU * folded as f64 / n as f64).cos()) + energy_offset;
            (k, energy)
        })
        .collect();
    modes.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
    modes
}

/// Spectral form of the tight-binding free-particle Hamiltonian
/// `-(1/2m) * Laplacian + offset`, with dispersion
/// `E_k = (1 - cos(2*pi*k/N)) / (m * spacing^2) + offset`.
///
/// Eigenvectors are the discrete plane waves; the `+-k` pairs come out
/// exactly degenerate and are flagged as such.
pub fn free_particle_system(lattice: &Lattice, energy_offset: f64) -> Result<SpectralSystem> {
    let n = lattice.n_sites();
    let modes = sorted_modes(lattice, energy_offset);
    let energies: Vec<f64> = modes.iter().map(|m| m.1).collect();
    let root = 1.0 / (n as f64).sqrt();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &(k, _)) in modes.iter().enumerate() {
        for j in 0..n {
            let angle = TAU * ((j * k) % n) as f64 / n as f64;
            vectors.set(j, col, Complex64::from_polar(root, angle));
        }
    }
    // Plane-wave columns are orthonormal by construction; the explicit check
    // is quadratic-in-memory cubic-in-time and covered by tests instead.
    SpectralSystem::from_spectral_trusted(energies, vectors)
}

/// Wavenumber of each sorted mode of [`free_particle_system`], in the same
/// column order.
pub fn free_particle_wavenumbers(lattice: &Lattice, energy_offset: f64) -> Vec<usize> {
    sorted_modes(lattice, energy_offset).iter().map(|m| m.0).collect()
}

/// Converts a position-representation state into spectral coefficients of
/// `system` (which must come from the same lattice).
pub fn lattice_state_to_spectral(
    state: &LatticeState,
    lattice: &Lattice,
    system: &SpectralSystem,
) -> Result<StateVector> {
    if system.dim() != state.n_sites() {
        return Err(Error::DimensionMismatch {
            left: system.dim(),
            right: state.n_sites(),
        });
    }
    let raw = system.eigenvectors().adjoint_mul_vec(state.amplitudes())?;
    let scale = lattice.spacing().sqrt();
    let coeffs: Vec<Complex64> = raw.into_iter().map(|z| z * scale).collect();
    StateVector::new(coeffs, "lattice state")
}

/// The position observable `diag(x_j)` rotated into the energy eigenbasis of
/// `system`.
pub fn position_observable(lattice: &Lattice, system: &SpectralSystem) -> Result<Observable> {
    if system.dim() != lattice.n_sites() {
        return Err(Error::DimensionMismatch {
            left: system.dim(),
            right: lattice.n_sites(),
        });
    }
    let positions: Vec<f64> = (0..lattice.n_sites())
        .map(|j| lattice.site_coordinate(j))
        .collect();
    // Eigenbasis of the position operator in spectral coefficients: column j
    // is V^H e_j, i.e. the adjoint of the eigenvector matrix.
    Observable::from_spectral(positions, system.eigenvectors().adjoint())
}

/// The momentum observable; diagonal in the energy eigenbasis because every
/// plane-wave mode is a momentum eigenstate.
pub fn momentum_observable(lattice: &Lattice, system: &SpectralSystem) -> Result<Observable> {
    if system.dim() != lattice.n_sites() {
        return Err(Error::DimensionMismatch {
            left: system.dim(),
            right: lattice.n_sites(),
        });
    }
    let momenta: Vec<f64> = free_particle_wavenumbers(lattice, 0.0)
        .iter()
        .map(|&k| lattice.momentum_of_wavenumber(k))
        .collect();
    Observable::from_matrix(ComplexMatrix::from_real_diagonal(&momenta))
}

/// Momentum expectation evaluated in the momentum representation:
/// `sum_k p_k |psi_hat_k|^2 * spacing`.
pub fn momentum_measurement(state: &LatticeState, lattice: &Lattice) -> Result<f64> {
    let norm_sqr = discrete_norm_sqr(state.amplitudes(), lattice);
    if (norm_sqr - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized { norm_sqr });
    }
    let momentum_rep = dft_forward(state)?;
    let spacing = lattice.spacing();
    Ok(momentum_rep
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(k, z)| lattice.momentum_of_wavenumber(k) * z.norm_sqr() * spacing)
        .sum())
}

/// Position expectation evaluated directly in the position representation.
pub fn position_expectation(state: &LatticeState, lattice: &Lattice) -> Result<f64> {
    let norm_sqr = discrete_norm_sqr(state.amplitudes(), lattice);
    if (norm_sqr - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized { norm_sqr });
    }
    let spacing = lattice.spacing();
    Ok(state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(j, z)| lattice.site_coordinate(j) * z.norm_sqr() * spacing)
        .sum())
}

/// Report of the position-measurement chain: the phase-ensemble pipeline run
/// with the position observable on the free-particle system, with every
/// truncation parameter echoed.
#[derive(Debug, Clone)]
pub struct PositionChainReport {
    pub n_sites: usize,
    pub length: f64,
    pub mass: f64,
    pub energy_offset: f64,
    pub t_e: f64,
    pub n_shots: usize,
    pub seed: u64,
    pub born_position: f64,
    pub run: EnsembleRun,
    pub abs_error: f64,
    pub pass: bool,
}

/// Runs the full pipeline for the position observable and compares the
/// renormalized ensemble mean against the Born oracle `<x>`:
/// pass iff `|mean/kappa - <x>| <= 4 * stderr / kappa`.
pub fn position_measurement_chain(
    state: &LatticeState,
    lattice: &Lattice,
    energy_offset: f64,
    options: &EnsembleOptions,
) -> Result<PositionChainReport> {
    let system = free_particle_system(lattice, energy_offset)?;
    let spectral_state = lattice_state_to_spectral(state, lattice, &system)?;
    let obs = position_observable(lattice, &system)?;
    let born = born_expectation(&spectral_state, &obs)?;
    let run = run_ensemble(&system, &spectral_state, &obs, options)?;
    let abs_error = run.abs_error();
    let tolerance = 4.0 * run.stats.stderr / run.kappa;
    Ok(PositionChainReport {
        n_sites: lattice.n_sites(),
        length: lattice.length(),
        mass: lattice.mass(),
        energy_offset,
        t_e: options.t_e,
        n_shots: options.n_shots,
        seed: options.seed,
        born_position: born,
        abs_error,
        pass: abs_error <= tolerance,
        run,
    })
}

// --- text serialization -------------------------------------------------
//
// One record per line: `<site> <re> <im>` with 17 significant digits.

/// Serializes a lattice state, one `site re im` line per site.
pub fn lattice_state_to_text(state: &LatticeState) -> String {
    let mut out = String::new();
    for (j, z) in state.amplitudes().iter().enumerate() {
        out.push_str(&format!("{} {:.16e} {:.16e}\n", j, z.re, z.im));
    }
    out
}

/// Parses the text form back into a state on `lattice`.
pub fn lattice_state_from_text(lattice: &Lattice, text: &str) -> Result<LatticeState> {
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); lattice.n_sites()];
    let mut seen = 0usize;
    for (line_no, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let line = line_no + 1;
        let [site, re, im] = fields.as_slice() else {
            return Err(Error::Parse {
                line,
                message: format!("expected `site re im`, got {trimmed:?}"),
            });
        };
        let site: usize = site.parse().map_err(|_| Error::Parse {
            line,
            message: format!("invalid site index {site:?}"),
        })?;
        if site >= amplitudes.len() {
            return Err(Error::Parse {
                line,
                message: format!("site {site} out of range for {} sites", amplitudes.len()),
            });
        }
        let re: f64 = re.parse().map_err(|_| Error::Parse {
            line,
            message: format!("invalid re {re:?}"),
        })?;
        let im: f64 = im.parse().map_err(|_| Error::Parse {
            line,
            message: format!("invalid im {im:?}"),
        })?;
        amplitudes[site] = Complex64::new(re, im);
        seen += 1;
    }
    if seen != lattice.n_sites() {
        return Err(Error::Parse {
            line: 0,
            message: format!("expected {} site records, got {seen}", lattice.n_sites()),
        });
    }
    LatticeState::new(lattice, amplitudes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{sample_paper_measure, SamplerTag};
    use crate::numeric::RngStream;

    fn lattice8() -> Lattice {
        Lattice::new(8, 4.0, 1.0).unwrap()
    }

    #[test]
    fn lattice_validation() {
        assert!(matches!(Lattice::new(12, 1.0, 1.0), Err(Error::BadLatticeSize { .. })));
        assert!(matches!(Lattice::new(4, 1.0, 1.0), Err(Error::BadLatticeSize { .. })));
        assert!(Lattice::new(8, 1.0, -1.0).is_err());
        assert!(Lattice::new(8, 0.0, 1.0).is_err());
    }

    #[test]
    fn free_particle_mode_zero_energy_is_the_offset() {
        let sys = free_particle_system(&lattice8(), 0.75).unwrap();
        assert_eq!(sys.energy(0), 0.75);
        // Constant mode is the lowest.
        let ks = free_particle_wavenumbers(&lattice8(), 0.75);
        assert_eq!(ks[0], 0);
    }

    #[test]
    fn zero_offset_is_rejected() {
        assert!(matches!(
            free_particle_system(&lattice8(), 0.0),
            Err(Error::NonPositiveSpectrum { .. })
        ));
    }

    #[test]
    fn plus_minus_pairs_are_degenerate() {
        let sys = free_particle_system(&lattice8(), 1.0).unwrap();
        let ks = free_particle_wavenumbers(&lattice8(), 1.0);
        let reps = sys.degeneracy_reps();
        // k = 1..3 pair with k = 7..5; k = 0 and k = 4 stand alone.
        for n in 0..8 {
            let partner = (0..8).find(|&m| ks[m] == (8 - ks[n]) % 8).unwrap();
            if ks[n] == 0 || ks[n] == 4 {
                assert_eq!(reps[n], n);
            } else {
                assert_eq!(reps[n], reps[partner], "modes {n}/{partner} should pair");
            }
        }
        assert!(sys.has_degeneracies());
    }

    #[test]
    fn long_wavelength_dispersion_approaches_continuum() {
        let n = 64;
        let lattice = Lattice::new(n, 8.0, 1.5).unwrap();
        let sys = free_particle_system(&lattice, 0.0);
        // offset 0 is rejected, so compare raw dispersion instead.
        assert!(sys.is_err());
        let sys = free_particle_system(&lattice, 1.0).unwrap();
        let ks = free_particle_wavenumbers(&lattice, 1.0);
        for n_mode in 0..sys.dim() {
            let k = ks[n_mode];
            let folded = k.min(n - k);
            if folded == 0 || folded > n / 16 {
                continue;
            }
            let exact = (TAU * folded as f64 / lattice.length()).powi(2) / (2.0 * lattice.mass());
            let got = sys.energy(n_mode) - 1.0;
            let rel = (got - exact).abs() / exact;
            assert!(rel <= 0.05, "k={folded}: rel err {rel}");
        }
    }

    #[test]
    fn eigenvectors_diagonalize_the_discrete_laplacian() {
        let lattice = lattice8();
        let sys = free_particle_system(&lattice, 1.0).unwrap();
        let n = lattice.n_sites();
        let h = 1.0 / (2.0 * lattice.mass() * lattice.spacing().powi(2));
        // H = -(1/2m) Laplacian + offset, tridiagonal periodic.
        let mut ham = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            ham.set(j, j, Complex64::new(2.0 * h + 1.0, 0.0));
            ham.set(j, (j + 1) % n, Complex64::new(-h, 0.0));
            ham.set((j + 1) % n, j, Complex64::new(-h, 0.0));
        }
        for col in 0..n {
            let v = sys.eigenvectors().column(col);
            let hv = ham.mul_vec(&v).unwrap();
            let err: f64 = hv
                .iter()
                .zip(v.iter())
                .map(|(a, b)| (a - b * sys.energy(col)).norm())
                .fold(0.0, f64::max);
            assert!(err <= 1e-9, "column {col} residual {err}");
        }
        assert!(sys.eigenvectors().unitarity_residual() <= 1e-10);
    }

    #[test]
    fn delta_state_transforms_flat_and_measures_its_site() {
        let lattice = lattice8();
        let state = LatticeState::delta(&lattice, 3).unwrap();
        let momentum_rep = dft_forward(&state).unwrap();
        let mag = momentum_rep.amplitudes()[0].norm();
        for z in momentum_rep.amplitudes() {
            assert!((z.norm() - mag).abs() <= 1e-12);
        }
        let x = position_expectation(&state, &lattice).unwrap();
        assert!((x - lattice.site_coordinate(3)).abs() <= 1e-12);
    }

    #[test]
    fn symmetric_two_delta_state_centers_at_half_length() {
        let lattice = lattice8();
        let j = 2;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 8];
        amplitudes[j] = Complex64::new(1.0, 0.0);
        amplitudes[8 - j] = Complex64::new(1.0, 0.0);
        let state = LatticeState::normalized(&lattice, amplitudes).unwrap();
        let x = position_expectation(&state, &lattice).unwrap();
        assert!((x - 0.5 * lattice.length()).abs() <= 1e-12);
    }

    #[test]
    fn real_symmetric_packet_has_zero_momentum() {
        // Parity: a real envelope has a symmetric momentum distribution, and
        // its tail at the unpaired Nyquist bin is far below round-off.
        let lattice = Lattice::new(64, 16.0, 1.0).unwrap();
        let state = LatticeState::gaussian_packet(&lattice, 8.0, 1.0, 0.0).unwrap();
        let p = momentum_measurement(&state, &lattice).unwrap();
        assert!(p.abs() <= 1e-12, "p = {p}");
    }

    #[test]
    fn plane_wave_momentum_is_exact() {
        let lattice = Lattice::new(16, 4.0, 1.0).unwrap();
        let k0 = 3;
        let n = lattice.n_sites();
        let amps: Vec<Complex64> = (0..n)
            .map(|j| Complex64::from_polar(1.0, TAU * (j * k0) as f64 / n as f64))
            .collect();
        let state = LatticeState::normalized(&lattice, amps).unwrap();
        let p = momentum_measurement(&state, &lattice).unwrap();
        let expected = lattice.momentum_of_wavenumber(k0);
        assert!((p - expected).abs() <= 1e-10, "p={p} expected={expected}");
    }

    #[test]
    fn packet_momentum_matches_imprinted_gradient() {
        let lattice = Lattice::new(1024, 32.0, 1.0).unwrap();
        // Imprinted gradient on an exact momentum bin.
        let q = 8.0 * TAU / lattice.length();
        let state =
            LatticeState::gaussian_packet(&lattice, 0.5 * lattice.length(), 2.0, q).unwrap();
        let p = momentum_measurement(&state, &lattice).unwrap();
        assert!((p - q).abs() <= 1e-6, "p={p} q={q}");
    }

    #[test]
    fn spectral_conversion_preserves_momentum_expectation() {
        let lattice = Lattice::new(32, 8.0, 1.0).unwrap();
        let q = 2.0 * TAU / lattice.length();
        let state = LatticeState::gaussian_packet(&lattice, 4.0, 1.0, q).unwrap();
        let sys = free_particle_system(&lattice, 1.0).unwrap();
        let spectral = lattice_state_to_spectral(&state, &lattice, &sys).unwrap();
        let obs = momentum_observable(&lattice, &sys).unwrap();
        let via_born = born_expectation(&spectral, &obs).unwrap();
        let via_fft = momentum_measurement(&state, &lattice).unwrap();
        assert!((via_born - via_fft).abs() <= 1e-9, "{via_born} vs {via_fft}");
    }

    #[test]
    fn position_observable_agrees_with_direct_expectation() {
        let lattice = Lattice::new(32, 8.0, 1.0).unwrap();
        let state = LatticeState::gaussian_packet(&lattice, 3.0, 1.0, 0.0).unwrap();
        let sys = free_particle_system(&lattice, 1.0).unwrap();
        let spectral = lattice_state_to_spectral(&state, &lattice, &sys).unwrap();
        let obs = position_observable(&lattice, &sys).unwrap();
        let via_born = born_expectation(&spectral, &obs).unwrap();
        let direct = position_expectation(&state, &lattice).unwrap();
        assert!((via_born - direct).abs() <= 1e-9, "{via_born} vs {direct}");
    }

    #[test]
    fn degenerate_pairs_share_phases_in_samples() {
        let lattice = lattice8();
        let sys = free_particle_system(&lattice, 1.0).unwrap();
        let rng = RngStream::new(21, 0);
        let sample = sample_paper_measure(&rng, &sys, 1.0, false).unwrap();
        assert_eq!(sample.tag(), SamplerTag::PaperMeasure);
        let reps = sys.degeneracy_reps();
        for n in 0..sys.dim() {
            assert_eq!(sample.phases()[n], sample.phases()[reps[n]]);
            assert_eq!(sample.dt_i()[n], sample.dt_i()[reps[n]]);
        }
    }

    #[test]
    fn chain_smoke_on_a_small_lattice() {
        let lattice = Lattice::new(16, 4.0, 1.0).unwrap();
        let state = LatticeState::gaussian_packet(&lattice, 2.0, 0.5, 0.0).unwrap();
        let report = position_measurement_chain(
            &state,
            &lattice,
            1.0,
            &EnsembleOptions {
                n_shots: 20_000,
                seed: 5,
                ..EnsembleOptions::default()
            },
        )
        .unwrap();
        assert!(report.pass, "abs_error {}", report.abs_error);
        assert!((report.born_position - 2.0).abs() <= 0.05);
    }

    #[test]
    fn serialization_round_trips() {
        let lattice = lattice8();
        let state = LatticeState::gaussian_packet(&lattice, 1.0, 0.7, 1.5).unwrap();
        let text = lattice_state_to_text(&state);
        let back = lattice_state_from_text(&lattice, &text).unwrap();
        assert_eq!(back.amplitudes(), state.amplitudes());

        let err = lattice_state_from_text(&lattice, "0 nope 1.0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
