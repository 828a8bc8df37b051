//! Seeded generators for random systems, states, and observables.
//!
//! Shared by this crate's property tests and downstream acceptance suites.
//! Everything routes through [`RngStream`], so generated triples are
//! reproducible from a seed alone.

use num_complex::Complex64;

use crate::born::Observable;
use crate::numeric::{ComplexMatrix, RngStream};
use crate::spectral::{SpectralSystem, StateVector};

/// Random Hermitian matrix with entries of order one.
pub fn random_hermitian(rng: &mut RngStream, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in r..dim {
            if r == c {
                m.set(r, c, Complex64::new(2.0 * rng.next_unit() - 1.0, 0.0));
            } else {
                let z = Complex64::new(rng.next_unit() - 0.5, rng.next_unit() - 0.5);
                m.set(r, c, z);
                m.set(c, r, z.conj());
            }
        }
    }
    m
}

/// Random normalized state.
pub fn random_state(rng: &mut RngStream, dim: usize) -> StateVector {
    loop {
        let amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.next_unit() - 0.5, rng.next_unit() - 0.5))
            .collect();
        if let Ok(state) = StateVector::normalized(amps, "random") {
            return state;
        }
    }
}

/// Random system with a strictly positive spectrum.
pub fn random_system(rng: &mut RngStream, dim: usize) -> SpectralSystem {
    let h = random_hermitian(rng, dim);
    // Eigenvalues of a dim-scale Hermitian matrix sit well inside +-dim, so
    // this offset always clears the positivity floor.
    SpectralSystem::from_hamiltonian(&h, dim as f64 + 1.0).expect("offset clears the spectrum")
}

/// Random observable in the energy eigenbasis.
pub fn random_observable(rng: &mut RngStream, dim: usize) -> Observable {
    Observable::from_matrix(random_hermitian(rng, dim)).expect("hermitian by construction")
}

/// A full random (system, state, observable) triple of one dimension.
pub fn random_triple(rng: &mut RngStream, dim: usize) -> (SpectralSystem, StateVector, Observable) {
    (
        random_system(rng, dim),
        random_state(rng, dim),
        random_observable(rng, dim),
    )
}
