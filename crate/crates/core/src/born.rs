//! Ground-truth quantum expectation values and outcome distributions.
//!
//! This module is the oracle the phase-ensemble machinery is validated
//! against: `<A> = <psi|A|psi> = sum_m |b_m|^2 a_m`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{hermitian_eigendecompose, ComplexMatrix};
use crate::spectral::{SpectralSystem, StateVector, HERMITICITY_TOL};

/// Relative tolerance for grouping observable eigenvalues into one outcome.
pub const OUTCOME_REL_TOL: f64 = 1e-9;

/// A Hermitian observable, expressed in the energy eigenbasis, together with
/// its spectral data. Constructors compute or validate the spectral data so
/// the `(matrix, eigenvalues, eigenbasis)` triple can never disagree.
#[derive(Debug, Clone)]
pub struct Observable {
    matrix: ComplexMatrix,
    eigenvalues: Vec<f64>,
    eigenbasis: ComplexMatrix,
}

impl Observable {
    /// Builds an observable from a Hermitian matrix; the spectrum is computed
    /// internally.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        let eig = hermitian_eigendecompose(&matrix, HERMITICITY_TOL)?;
        let mut symmetrized = matrix;
        symmetrized.symmetrize();
        Ok(Self {
            matrix: symmetrized,
            eigenvalues: eig.values,
            eigenbasis: eig.vectors,
        })
    }

    /// Builds an observable from known spectral data; the matrix
    /// `B diag(a) B^H` is computed internally.
    pub fn from_spectral(eigenvalues: Vec<f64>, eigenbasis: ComplexMatrix) -> Result<Self> {
        let residual = eigenbasis.unitarity_residual();
        if residual > crate::spectral::ORTHONORMALITY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        if eigenbasis.rows() != eigenvalues.len() || !eigenbasis.is_square() {
            return Err(Error::DimensionMismatch {
                left: eigenbasis.rows(),
                right: eigenvalues.len(),
            });
        }
        let dim = eigenvalues.len();
        let mut matrix = ComplexMatrix::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for (m, &a) in eigenvalues.iter().enumerate() {
                    acc += eigenbasis.get(r, m) * a * eigenbasis.get(c, m).conj();
                }
                matrix.set(r, c, acc);
            }
        }
        matrix.symmetrize();
        Ok(Self {
            matrix,
            eigenvalues,
            eigenbasis,
        })
    }

    /// The identity observable of dimension `dim`.
    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
            eigenvalues: vec![1.0; dim],
            eigenbasis: ComplexMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Outcome values `a_m`, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary matrix whose columns are the outcome eigenvectors `Phi_m`.
    pub fn eigenbasis(&self) -> &ComplexMatrix {
        &self.eigenbasis
    }

    /// Coefficients `b_m = <Phi_m|psi>` of a state in the outcome basis.
    pub fn outcome_coefficients(&self, state: &StateVector) -> Result<Vec<Complex64>> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: state.dim(),
                right: self.dim(),
            });
        }
        self.eigenbasis.adjoint_mul_vec(state.amplitudes())
    }
}

/// Measurement outcomes with their probabilities; duplicate eigenvalues are
/// aggregated into one entry per distinct outcome value.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    outcomes: Vec<(f64, f64)>,
}

impl OutcomeDistribution {
    /// `(outcome value, probability)` pairs, ascending in value.
    pub fn outcomes(&self) -> &[(f64, f64)] {
        &self.outcomes
    }

    /// Mean of the distribution.
    pub fn expectation(&self) -> f64 {
        self.outcomes.iter().map(|(a, p)| a * p).sum()
    }

    pub fn total_probability(&self) -> f64 {
        self.outcomes.iter().map(|(_, p)| p).sum()
    }
}

fn check_state(state: &StateVector, dim: usize) -> Result<()> {
    if state.dim() != dim {
        return Err(Error::DimensionMismatch {
            left: state.dim(),
            right: dim,
        });
    }
    let norm_sqr = state.norm_sqr();
    if (norm_sqr - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized { norm_sqr });
    }
    Ok(())
}

/// Born expectation `<psi|A|psi>` via the matrix quadratic form.
///
/// The imaginary residue is asserted below 1e-10 and discarded; a Hermitian
/// matrix cannot produce more than round-off there.
pub fn born_expectation(state: &StateVector, obs: &Observable) -> Result<f64> {
    check_state(state, obs.dim())?;
    let av = obs.matrix.mul_vec(state.amplitudes())?;
    let value: Complex64 = state
        .amplitudes()
        .iter()
        .zip(av.iter())
        .map(|(c, y)| c.conj() * y)
        .sum();
    let scale = 1.0 + value.re.abs();
    assert!(
        value.im.abs() <= 1e-10 * scale,
        "imaginary residue {} too large for a Hermitian observable",
        value.im
    );
    Ok(value.re)
}

/// Outcome probabilities `|<Phi_m|psi>|^2`, aggregated per distinct eigenvalue.
pub fn outcome_distribution(state: &StateVector, obs: &Observable) -> Result<OutcomeDistribution> {
    check_state(state, obs.dim())?;
    let coeffs = obs.outcome_coefficients(state)?;
    let scale = obs
        .eigenvalues
        .iter()
        .fold(0.0_f64, |m, a| m.max(a.abs()))
        .max(1.0);
    let mut outcomes: Vec<(f64, f64)> = Vec::new();
    for (m, b) in coeffs.iter().enumerate() {
        let a = obs.eigenvalues[m];
        let p = b.norm_sqr();
        match outcomes.last_mut() {
            Some((prev, acc)) if (a - *prev).abs() <= OUTCOME_REL_TOL * scale => *acc += p,
            _ => outcomes.push((a, p)),
        }
    }
    Ok(OutcomeDistribution { outcomes })
}

/// True iff the observable commutes with the Hamiltonian within `tol`,
/// measured as `|AH - HA|_F`.
pub fn commuting_basis_check(system: &SpectralSystem, obs: &Observable, tol: f64) -> Result<bool> {
    if system.dim() != obs.dim() {
        return Err(Error::DimensionMismatch {
            left: system.dim(),
            right: obs.dim(),
        });
    }
    // H is diagonal in its own basis, so [A, H]_{ij} = A_ij (E_j - E_i).
    let e = system.energies();
    let a = &obs.matrix;
    let mut acc = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            acc += a.get(i, j).norm_sqr() * (e[j] - e[i]).powi(2);
        }
    }
    Ok(acc.sqrt() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralSystem;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Observable with outcomes +-1 and eigenvectors (1, +-1)/sqrt(2).
    fn pm_one() -> Observable {
        Observable::from_matrix(
            ComplexMatrix::from_entries(
                2,
                2,
                vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            )
            .unwrap(),
        )
        .unwrap()
    }

    fn born08_state() -> StateVector {
        StateVector::new(vec![c(0.8_f64.sqrt(), 0.0), c(0.2_f64.sqrt(), 0.0)], "born08").unwrap()
    }

    #[test]
    fn identity_observable_has_unit_expectation() {
        let obs = Observable::identity(3);
        let s = StateVector::normalized(vec![c(1.0, 0.5), c(-0.25, 0.0), c(0.0, 2.0)], "any").unwrap();
        assert!((born_expectation(&s, &obs).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn eigenstate_yields_its_eigenvalue() {
        let obs = pm_one();
        let minus = StateVector::new(obs.eigenbasis().column(0), "phi-").unwrap();
        let got = born_expectation(&minus, &obs).unwrap();
        assert!((got - obs.eigenvalues()[0]).abs() <= 1e-12);
    }

    #[test]
    fn two_level_expectation_is_point_eight() {
        // 0.9 * (+1) + 0.1 * (-1) = 0.8.
        let got = born_expectation(&born08_state(), &pm_one()).unwrap();
        assert!((got - 0.8).abs() <= 1e-12);
    }

    #[test]
    fn distribution_of_eigenstate_is_a_point_mass() {
        let obs = pm_one();
        let plus = StateVector::new(obs.eigenbasis().column(1), "phi+").unwrap();
        let dist = outcome_distribution(&plus, &obs).unwrap();
        let on_plus = dist.outcomes().iter().find(|(a, _)| *a > 0.0).unwrap();
        assert!((on_plus.1 - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn uniform_superposition_has_flat_distribution() {
        let dim = 4;
        let obs = Observable::from_matrix(ComplexMatrix::from_real_diagonal(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        let amps = vec![c(0.5, 0.0); dim];
        let s = StateVector::new(amps, "uniform").unwrap();
        let dist = outcome_distribution(&s, &obs).unwrap();
        assert_eq!(dist.outcomes().len(), dim);
        for (_, p) in dist.outcomes() {
            assert!((p - 0.25).abs() <= 1e-12);
        }
    }

    #[test]
    fn two_level_distribution_matches_hand_values() {
        let dist = outcome_distribution(&born08_state(), &pm_one()).unwrap();
        assert_eq!(dist.outcomes().len(), 2);
        assert!((dist.outcomes()[0].0 + 1.0).abs() <= 1e-12);
        assert!((dist.outcomes()[0].1 - 0.1).abs() <= 1e-12);
        assert!((dist.outcomes()[1].0 - 1.0).abs() <= 1e-12);
        assert!((dist.outcomes()[1].1 - 0.9).abs() <= 1e-12);
        assert!((dist.expectation() - 0.8).abs() <= 1e-12);
        assert!((dist.total_probability() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn degenerate_outcomes_are_aggregated() {
        let obs = Observable::from_matrix(ComplexMatrix::from_real_diagonal(&[2.0, 2.0, 5.0])).unwrap();
        let s = StateVector::normalized(vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)], "u").unwrap();
        let dist = outcome_distribution(&s, &obs).unwrap();
        assert_eq!(dist.outcomes().len(), 2);
        assert!((dist.outcomes()[0].1 - 2.0 / 3.0).abs() <= 1e-12);
    }

    #[test]
    fn commutation_check_matches_hand_computation() {
        let sys = SpectralSystem::from_spectral(vec![1.0, 2.0], ComplexMatrix::identity(2)).unwrap();
        // A = H (diagonal) commutes; the identity commutes; sigma_x does not.
        let h_obs = Observable::from_matrix(ComplexMatrix::from_real_diagonal(&[1.0, 2.0])).unwrap();
        assert!(commuting_basis_check(&sys, &h_obs, 1e-12).unwrap());
        assert!(commuting_basis_check(&sys, &Observable::identity(2), 1e-12).unwrap());
        // Commutator of sigma_x with diag(1,2) has Frobenius norm sqrt(2).
        assert!(!commuting_basis_check(&sys, &pm_one(), 1e-12).unwrap());
        assert!(commuting_basis_check(&sys, &pm_one(), 2.0).unwrap());
    }

    #[test]
    fn spectral_constructor_matches_matrix_constructor() {
        let from_matrix = pm_one();
        let from_spectral = Observable::from_spectral(
            from_matrix.eigenvalues().to_vec(),
            from_matrix.eigenbasis().clone(),
        )
        .unwrap();
        assert!(from_matrix.matrix().frobenius_distance(from_spectral.matrix()) <= 1e-12);
    }

    #[test]
    fn dimension_and_normalization_guards() {
        let obs = pm_one();
        let s3 = StateVector::basis_state(3, 0, "e0");
        assert!(matches!(
            born_expectation(&s3, &obs),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            StateVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)], "bad"),
            Err(Error::NotNormalized { .. })
        ));
    }
}
