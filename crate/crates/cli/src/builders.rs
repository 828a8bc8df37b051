//! Builds systems, states, and observables from config descriptors.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use phase_ensemble::born::Observable;
use phase_ensemble::lattice::{
    free_particle_system, lattice_state_from_text, momentum_observable, position_observable,
    Lattice, LatticeState,
};
use phase_ensemble::numeric::ComplexMatrix;
use phase_ensemble::spectral::{state_from_text, system_from_text, SpectralSystem, StateVector};

use crate::config::{ExperimentConfig, LatticeSpec, ObservableSpec, StateSpec, SystemSpec};
use crate::CliError;

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Run(format!("cannot read {}: {e}", path.display())))
}

/// Parses `M row col re im` records into a Hermitian matrix; the dimension is
/// the largest index seen plus one, unset entries are zero.
pub fn matrix_from_text(text: &str) -> Result<ComplexMatrix, CliError> {
    let mut entries: Vec<(usize, usize, Complex64)> = Vec::new();
    let mut dim = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let ["M", r, c, re, im] = fields.as_slice() else {
            return Err(CliError::Run(format!(
                "matrix file line {line}: expected `M row col re im`, got {trimmed:?}"
            )));
        };
        let parse_idx = |tok: &str| -> Result<usize, CliError> {
            tok.parse()
                .map_err(|_| CliError::Run(format!("matrix file line {line}: bad index {tok:?}")))
        };
        let parse_num = |tok: &str| -> Result<f64, CliError> {
            tok.parse()
                .map_err(|_| CliError::Run(format!("matrix file line {line}: bad number {tok:?}")))
        };
        let (r, c) = (parse_idx(r)?, parse_idx(c)?);
        dim = dim.max(r + 1).max(c + 1);
        entries.push((r, c, Complex64::new(parse_num(re)?, parse_num(im)?)));
    }
    if dim == 0 {
        return Err(CliError::Run("matrix file holds no M records".into()));
    }
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (r, c, z) in entries {
        m.set(r, c, z);
    }
    Ok(m)
}

/// Builds the spectral system named by the config (non-lattice experiments).
pub fn build_system(config: &ExperimentConfig) -> Result<SpectralSystem, CliError> {
    let spec = config
        .system
        .as_ref()
        .ok_or_else(|| CliError::Run("no system specified".into()))?;
    let offset = config.energy_offset;
    let system = match spec {
        SystemSpec::TwoLevel => {
            SpectralSystem::from_spectral(vec![1.0 + offset, 2.0 + offset], ComplexMatrix::identity(2))?
        }
        SystemSpec::Incommensurate3 => SpectralSystem::from_spectral(
            vec![1.0 + offset, std::f64::consts::SQRT_2 + offset, 3.0f64.sqrt() + offset],
            ComplexMatrix::identity(3),
        )?,
        SystemSpec::MatrixFile(path) => {
            let matrix = matrix_from_text(&read_file(path)?)?;
            SpectralSystem::from_hamiltonian(&matrix, offset)?
        }
        SystemSpec::SpectralFile(path) => {
            let loaded = system_from_text(&read_file(path)?)?;
            if offset != 0.0 {
                let energies = loaded.energies().iter().map(|e| e + offset).collect();
                SpectralSystem::from_spectral(energies, loaded.eigenvectors().clone())?
            } else {
                loaded
            }
        }
    };
    Ok(system)
}

pub fn build_lattice(spec: &LatticeSpec) -> Result<Lattice, CliError> {
    Ok(Lattice::new(spec.n_sites, spec.length, spec.mass)?)
}

/// Builds a spectral-coefficient state of the system's dimension.
pub fn build_state(config: &ExperimentConfig, dim: usize) -> Result<StateVector, CliError> {
    let spec = config
        .state
        .as_ref()
        .ok_or_else(|| CliError::Run("no state specified".into()))?;
    let state = match spec {
        StateSpec::Born08 => {
            if dim != 2 {
                return Err(CliError::Run(format!(
                    "state born08 is two-level but the system has {dim} modes"
                )));
            }
            StateVector::new(
                vec![
                    Complex64::new(0.8f64.sqrt(), 0.0),
                    Complex64::new(0.2f64.sqrt(), 0.0),
                ],
                "born08",
            )?
        }
        StateSpec::Uniform => {
            let amp = Complex64::new(1.0, 0.0);
            StateVector::normalized(vec![amp; dim], "uniform")?
        }
        StateSpec::Basis(k) => {
            if *k >= dim {
                return Err(CliError::Run(format!(
                    "basis state {k} out of range for {dim} modes"
                )));
            }
            StateVector::basis_state(dim, *k, format!("basis{k}"))
        }
        StateSpec::Amps(amps) => {
            if amps.len() != dim {
                return Err(CliError::Run(format!(
                    "amps supplies {} coefficients but the system has {dim} modes",
                    amps.len()
                )));
            }
            StateVector::normalized(amps.clone(), "amps")?
        }
        StateSpec::File(path) => state_from_text(&read_file(path)?, "file state")?,
        StateSpec::Delta(_) | StateSpec::Packet { .. } => {
            return Err(CliError::Run(format!(
                "state {spec:?} is lattice-only; use it with the free-particle experiment"
            )));
        }
    };
    if state.dim() != dim {
        return Err(CliError::Run(format!(
            "state has {} coefficients but the system has {dim} modes",
            state.dim()
        )));
    }
    Ok(state)
}

/// Builds a position-representation state on a lattice.
pub fn build_lattice_state(
    config: &ExperimentConfig,
    lattice: &Lattice,
) -> Result<LatticeState, CliError> {
    let spec = config
        .state
        .as_ref()
        .ok_or_else(|| CliError::Run("no state specified".into()))?;
    let state = match spec {
        StateSpec::Delta(site) => LatticeState::delta(lattice, *site)?,
        StateSpec::Packet {
            center,
            width,
            momentum,
        } => LatticeState::gaussian_packet(lattice, *center, *width, *momentum)?,
        StateSpec::File(path) => lattice_state_from_text(lattice, &read_file(path)?)?,
        other => {
            return Err(CliError::Run(format!(
                "state {other:?} is not a lattice state; use delta:<site>, packet:<c,w,q> or file:<path>"
            )));
        }
    };
    Ok(state)
}

/// Builds the observable named by the config against a given system.
pub fn build_observable(
    config: &ExperimentConfig,
    system: &SpectralSystem,
    lattice: Option<&Lattice>,
) -> Result<Observable, CliError> {
    let spec = config
        .observable
        .as_ref()
        .ok_or_else(|| CliError::Run("no observable specified".into()))?;
    let dim = system.dim();
    let obs = match spec {
        ObservableSpec::PmOne => {
            if dim != 2 {
                return Err(CliError::Run(format!(
                    "observable pm1 is two-level but the system has {dim} modes"
                )));
            }
            Observable::from_matrix(ComplexMatrix::from_entries(
                2,
                2,
                vec![
                    Complex64::new(0.0, 0.0),
                    Complex64::new(1.0, 0.0),
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, 0.0),
                ],
            )?)?
        }
        ObservableSpec::Identity => Observable::identity(dim),
        ObservableSpec::Hamiltonian => {
            Observable::from_spectral(system.energies().to_vec(), ComplexMatrix::identity(dim))?
        }
        ObservableSpec::MatrixFile(path) => {
            Observable::from_matrix(matrix_from_text(&read_file(path)?)?)?
        }
        ObservableSpec::Position => {
            let lattice = lattice.ok_or_else(|| {
                CliError::Run("observable position needs a lattice system".into())
            })?;
            position_observable(lattice, system)?
        }
        ObservableSpec::Momentum => {
            let lattice = lattice.ok_or_else(|| {
                CliError::Run("observable momentum needs a lattice system".into())
            })?;
            momentum_observable(lattice, system)?
        }
    };
    Ok(obs)
}

/// Free-particle system for a lattice config.
pub fn build_free_particle(
    config: &ExperimentConfig,
) -> Result<(Lattice, SpectralSystem), CliError> {
    let spec = config
        .lattice
        .ok_or_else(|| CliError::Run("free-particle needs a lattice = n,L,m key".into()))?;
    let lattice = build_lattice(&spec)?;
    let system = free_particle_system(&lattice, config.energy_offset)?;
    Ok((lattice, system))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn born_check_config() -> ExperimentConfig {
        parse_config(
            "experiment = born-check\nsystem = twolevel\nstate = born08\nobservable = pm1\nt_e = 1.0\nn_shots = 100\nseed = 1\n",
        )
        .unwrap()
    }

    #[test]
    fn builds_the_canonical_two_level_setup() {
        let config = born_check_config();
        let system = build_system(&config).unwrap();
        assert_eq!(system.energies(), &[1.0, 2.0]);
        let state = build_state(&config, system.dim()).unwrap();
        let obs = build_observable(&config, &system, None).unwrap();
        let born = phase_ensemble::born::born_expectation(&state, &obs).unwrap();
        assert!((born - 0.8).abs() <= 1e-12);
    }

    #[test]
    fn matrix_files_round_trip() {
        let text = "M 0 0 1.0 0.0\nM 0 1 0.0 -0.5\nM 1 0 0.0 0.5\nM 1 1 2.0 0.0\n";
        let m = matrix_from_text(text).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m.get(1, 0), Complex64::new(0.0, 0.5));
        assert!(matrix_from_text("junk\n").is_err());
        assert!(matrix_from_text("").is_err());
    }

    #[test]
    fn lattice_state_specs_reject_spectral_context() {
        let mut config = born_check_config();
        config.state = Some(StateSpec::Delta(3));
        assert!(build_state(&config, 2).is_err());
    }

    #[test]
    fn dimension_mismatches_are_reported() {
        let mut config = born_check_config();
        config.state = Some(StateSpec::Amps(vec![Complex64::new(1.0, 0.0); 3]));
        let err = build_state(&config, 2).unwrap_err();
        assert!(format!("{err}").contains("3 coefficients"));
    }
}
