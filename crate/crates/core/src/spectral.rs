//! Spectral representation of systems and states.
//!
//! A system is a Hamiltonian given by its eigenvalues and eigenvectors; a
//! state is the coefficient vector in that energy eigenbasis. Natural units
//! with hbar = 1 throughout, so each mode carries period `tau_n = 2*pi / E_n`
//! and evolution multiplies coefficient `n` by `exp(-i E_n t)`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{hermitian_eigendecompose, ComplexMatrix};

/// Hermiticity tolerance applied to user-supplied Hamiltonians.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Orthonormality tolerance for eigenbases, `|B^H B - I|_F`.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

/// Smallest admissible energy; below this the mode period diverges.
pub const MIN_ENERGY: f64 = 1e-9;

/// Relative energy gap under which two modes are treated as degenerate.
pub const DEGENERACY_REL_TOL: f64 = 1e-12;

/// A Hamiltonian in spectral form: strictly positive energies sorted
/// ascending, orthonormal eigenvector columns, and derived mode periods.
#[derive(Debug, Clone)]
pub struct SpectralSystem {
    energies: Vec<f64>,
    eigenvectors: ComplexMatrix,
    periods: Vec<f64>,
    /// For each mode, the index of the first mode in its degenerate group
    /// (its own index when non-degenerate).
    degeneracy_reps: Vec<usize>,
    applied_offset: f64,
}

impl SpectralSystem {
    /// Diagonalizes `hamiltonian + energy_offset * I`.
    ///
    /// The offset exists because mode periods `2*pi / E_n` require a strictly
    /// positive spectrum; it is recorded so experiments can report it.
    pub fn from_hamiltonian(hamiltonian: &ComplexMatrix, energy_offset: f64) -> Result<Self> {
        let eig = hermitian_eigendecompose(hamiltonian, HERMITICITY_TOL)?;
        let energies: Vec<f64> = eig.values.iter().map(|e| e + energy_offset).collect();
        let mut system = Self::assemble(energies, eig.vectors)?;
        system.applied_offset = energy_offset;
        Ok(system)
    }

    /// Builds a system directly from known spectral data.
    ///
    /// `energies` must be ascending and strictly positive; `eigenvectors`
    /// columns must be orthonormal within [`ORTHONORMALITY_TOL`].
    pub fn from_spectral(energies: Vec<f64>, eigenvectors: ComplexMatrix) -> Result<Self> {
        let residual = eigenvectors.unitarity_residual();
        if residual > ORTHONORMALITY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Self::assemble(energies, eigenvectors)
    }

    /// Like [`Self::from_spectral`] but skips the O(n^3) orthonormality
    /// check, for callers whose basis is orthonormal by construction
    /// (lattice plane waves at sizes where the check would dominate).
    pub(crate) fn from_spectral_trusted(
        energies: Vec<f64>,
        eigenvectors: ComplexMatrix,
    ) -> Result<Self> {
        Self::assemble(energies, eigenvectors)
    }

    fn assemble(energies: Vec<f64>, eigenvectors: ComplexMatrix) -> Result<Self> {
        if eigenvectors.rows() != energies.len() || !eigenvectors.is_square() {
            return Err(Error::DimensionMismatch {
                left: eigenvectors.rows(),
                right: energies.len(),
            });
        }
        let min_energy = energies.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(min_energy > MIN_ENERGY) {
            return Err(Error::NonPositiveSpectrum { min_energy });
        }
        if energies.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Parse {
                line: 0,
                message: "energies must be sorted ascending".into(),
            });
        }
        let periods: Vec<f64> = energies.iter().map(|e| TAU / e).collect();
        let degeneracy_reps = degeneracy_groups(&energies);
        Ok(Self {
            energies,
            eigenvectors,
            periods,
            degeneracy_reps,
            applied_offset: 0.0,
        })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Energies `E_n`, ascending.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn energy(&self, mode: usize) -> f64 {
        self.energies[mode]
    }

    /// Mode periods `tau_n = 2*pi / E_n` (always derived from the energies).
    pub fn periods(&self) -> &[f64] {
        &self.periods
    }

    pub fn period(&self, mode: usize) -> f64 {
        self.periods[mode]
    }

    pub fn max_period(&self) -> f64 {
        self.periods[0] // energies ascend, so periods descend
    }

    pub fn min_period(&self) -> f64 {
        self.periods[self.dim() - 1]
    }

    /// Eigenvector columns, unitary.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    /// Representative (first) mode index of each mode's degenerate group.
    pub fn degeneracy_reps(&self) -> &[usize] {
        &self.degeneracy_reps
    }

    pub fn has_degeneracies(&self) -> bool {
        self.degeneracy_reps.iter().enumerate().any(|(i, &r)| i != r)
    }

    /// Offset that was added to the raw Hamiltonian spectrum, if any.
    pub fn applied_offset(&self) -> f64 {
        self.applied_offset
    }

    /// The Hamiltonian as a matrix in its own eigenbasis: `diag(E)`.
    pub fn hamiltonian_in_eigenbasis(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&self.energies)
    }
}

fn degeneracy_groups(energies: &[f64]) -> Vec<usize> {
    let max_e = energies.iter().cloned().fold(0.0, f64::max);
    let tol = DEGENERACY_REL_TOL * max_e;
    let mut reps: Vec<usize> = Vec::with_capacity(energies.len());
    for (i, &e) in energies.iter().enumerate() {
        if i > 0 {
            let rep = reps[i - 1];
            if (e - energies[rep]).abs() <= tol {
                reps.push(rep);
                continue;
            }
        }
        reps.push(i);
    }
    reps
}

/// A unit-norm coefficient vector in the energy eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    label: String,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized (within 1e-10).
    pub fn new(amplitudes: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self {
            amplitudes,
            label: label.into(),
        })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amplitudes: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if norm_sqr == 0.0 || !norm_sqr.is_finite() {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let scale = 1.0 / norm_sqr.sqrt();
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|c| c * scale).collect(),
            label: label.into(),
        })
    }

    /// Basis state `e_k` of an otherwise unspecified `dim`-mode system.
    pub fn basis_state(dim: usize, k: usize, label: impl Into<String>) -> Self {
        assert!(k < dim);
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Self {
            amplitudes,
            label: label.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Advances a state by duration `t`: `c_n <- c_n * exp(-i E_n t)`.
pub fn evolve(system: &SpectralSystem, state: &StateVector, t: f64) -> Result<StateVector> {
    if system.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            left: system.dim(),
            right: state.dim(),
        });
    }
    let amplitudes = state
        .amplitudes()
        .iter()
        .zip(system.energies())
        .map(|(c, &e)| c * Complex64::from_polar(1.0, -e * t))
        .collect();
    Ok(StateVector {
        amplitudes,
        label: state.label.clone(),
    })
}

/// Translates a state backwards along the time axis by `delta`:
/// the state that was at `t` is returned as it looked at `t - delta`.
pub fn time_shift(system: &SpectralSystem, state_at_t: &StateVector, delta: f64) -> Result<StateVector> {
    evolve(system, state_at_t, -delta)
}

/// Coefficients of `state` in the orthonormal basis whose columns are `basis`.
pub fn expansion_coefficients(state: &StateVector, basis: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let residual = basis.unitarity_residual();
    if residual > ORTHONORMALITY_TOL {
        return Err(Error::NotUnitary { residual });
    }
    basis.adjoint_mul_vec(state.amplitudes())
}

// --- plain-text serialization ------------------------------------------------
//
// One record per line, 17 significant digits so every f64 round-trips:
//   E <index> <energy>
//   V <row> <col> <re> <im>
//   C <index> <re> <im>

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes a system as `E` and `V` records.
pub fn system_to_text(system: &SpectralSystem) -> String {
    let mut out = String::new();
    for (i, e) in system.energies().iter().enumerate() {
        out.push_str(&format!("E {} {}\n", i, fmt_f64(*e)));
    }
    let v = system.eigenvectors();
    for r in 0..v.rows() {
        for c in 0..v.cols() {
            let z = v.get(r, c);
            out.push_str(&format!("V {} {} {} {}\n", r, c, fmt_f64(z.re), fmt_f64(z.im)));
        }
    }
    out
}

/// Serializes a state as `C` records.
pub fn state_to_text(state: &StateVector) -> String {
    let mut out = String::new();
    for (i, z) in state.amplitudes().iter().enumerate() {
        out.push_str(&format!("C {} {} {}\n", i, fmt_f64(z.re), fmt_f64(z.im)));
    }
    out
}

struct RecordReader<'a> {
    lines: std::str::Lines<'a>,
    line_no: usize,
}

impl<'a> RecordReader<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            lines: text.lines(),
            line_no: 0,
        }
    }

    fn next_record(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for line in self.lines.by_ref() {
            self.line_no += 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            return Some((self.line_no, trimmed.split_whitespace().collect()));
        }
        None
    }
}

fn parse_field<T: std::str::FromStr>(token: &str, line: usize, what: &str) -> Result<T> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what}: {token:?}"),
    })
}

/// Parses `E`/`V` records back into a system.
pub fn system_from_text(text: &str) -> Result<SpectralSystem> {
    let mut energies: Vec<(usize, f64)> = Vec::new();
    let mut entries: Vec<(usize, usize, Complex64)> = Vec::new();
    let mut reader = RecordReader::new(text);
    while let Some((line, fields)) = reader.next_record() {
        match fields.as_slice() {
            ["E", idx, e] => {
                energies.push((parse_field(idx, line, "index")?, parse_field(e, line, "energy")?));
            }
            ["V", r, c, re, im] => {
                entries.push((
                    parse_field(r, line, "row")?,
                    parse_field(c, line, "col")?,
                    Complex64::new(parse_field(re, line, "re")?, parse_field(im, line, "im")?),
                ));
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected an E or V record, got {:?}", fields.join(" ")),
                })
            }
        }
    }
    let dim = energies.len();
    if dim == 0 {
        return Err(Error::Parse {
            line: 0,
            message: "no E records found".into(),
        });
    }
    let mut e_sorted = vec![f64::NAN; dim];
    for (idx, e) in energies {
        if idx >= dim {
            return Err(Error::Parse {
                line: 0,
                message: format!("E index {idx} out of range for {dim} modes"),
            });
        }
        e_sorted[idx] = e;
    }
    let mut vectors = ComplexMatrix::zeros(dim, dim);
    if entries.len() != dim * dim {
        return Err(Error::Parse {
            line: 0,
            message: format!("expected {} V records, got {}", dim * dim, entries.len()),
        });
    }
    for (r, c, z) in entries {
        if r >= dim || c >= dim {
            return Err(Error::Parse {
                line: 0,
                message: format!("V index ({r},{c}) out of range for dim {dim}"),
            });
        }
        vectors.set(r, c, z);
    }
    SpectralSystem::from_spectral(e_sorted, vectors)
}

/// Parses `C` records back into a state.
pub fn state_from_text(text: &str, label: impl Into<String>) -> Result<StateVector> {
    let mut amps: Vec<(usize, Complex64)> = Vec::new();
    let mut reader = RecordReader::new(text);
    while let Some((line, fields)) = reader.next_record() {
        match fields.as_slice() {
            ["C", idx, re, im] => {
                amps.push((
                    parse_field(idx, line, "index")?,
                    Complex64::new(parse_field(re, line, "re")?, parse_field(im, line, "im")?),
                ));
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected a C record, got {:?}", fields.join(" ")),
                })
            }
        }
    }
    let dim = amps.len();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    for (idx, z) in amps {
        if idx >= dim {
            return Err(Error::Parse {
                line: 0,
                message: format!("C index {idx} out of range for {dim} amplitudes"),
            });
        }
        amplitudes[idx] = z;
    }
    StateVector::new(amplitudes, label)
}
