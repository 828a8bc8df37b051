//! Finite-dimensional simulator for a phase-ensemble measurement model.
//!
//! A quantum system with a time-independent Hamiltonian is specified by its
//! spectrum. Each energy mode is periodic, so an experiment whose absolute
//! start time is unknown picks up one unknown phase per mode. This crate
//! implements that measurement model end to end:
//!
//! * [`spectral`] — systems, states, time evolution, change of basis;
//! * [`born`] — standard expectation values and outcome distributions, the
//!   oracle everything else is validated against;
//! * [`ensemble`] — per-mode residue sampling, the single-shot measurement
//!   functional, the sinc-constant renormalization `mean / kappa`, and
//!   deterministic Monte Carlo estimation;
//! * [`lattice`] — a discrete periodic free particle with an in-house FFT,
//!   where the position-measurement chain is run against the Born oracle;
//! * [`numeric`] — the self-contained kernel (complex matrices, a Jacobi
//!   eigensolver, adaptive Simpson quadrature, compensated tree summation,
//!   and a counter-based RNG).
//!
//! Determinism is a contract, not an accident: shot `s` of a `d`-mode system
//! draws from RNG streams `s * d + mode`, and reductions run in a fixed tree
//! order, so every result is bit-identical for any worker count.
//!
//! ```
//! use phase_ensemble::numeric::ComplexMatrix;
//! use phase_ensemble::spectral::{SpectralSystem, StateVector};
//! use phase_ensemble::born::{born_expectation, Observable};
//! use phase_ensemble::ensemble::{run_ensemble, EnsembleOptions};
//! use num_complex::Complex64;
//!
//! // Two-level system with <A> = 0.8.
//! let system = SpectralSystem::from_spectral(vec![1.0, 2.0], ComplexMatrix::identity(2))?;
//! let state = StateVector::new(
//!     vec![Complex64::new(0.8f64.sqrt(), 0.0), Complex64::new(0.2f64.sqrt(), 0.0)],
//!     "demo",
//! )?;
//! let obs = Observable::from_matrix(ComplexMatrix::from_entries(
//!     2, 2,
//!     vec![
//!         Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0),
//!         Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0),
//!     ],
//! )?)?;
//!
//! let born = born_expectation(&state, &obs)?;
//! let run = run_ensemble(&system, &state, &obs, &EnsembleOptions {
//!     n_shots: 20_000,
//!     seed: 7,
//!     ..EnsembleOptions::default()
//! })?;
//! assert!((run.renormalized.re - born).abs() <= 4.0 * run.stats.stderr / run.kappa);
//! # Ok::<(), phase_ensemble::Error>(())
//! ```

pub mod born;
pub mod ensemble;
mod error;
pub mod lattice;
pub mod numeric;
pub mod spectral;

pub mod testkit;

pub use error::{Error, Result};

#[cfg(doctest)]
mod guide;
