//! Self-contained numeric kernel: dense complex matrices, a Hermitian
//! eigensolver, adaptive quadrature, compensated summation, and a
//! counter-based random number generator.
//!
//! Everything here is pure and value-semantic; no global state.

mod eigen;
mod matrix;
mod quadrature;
mod rng;
mod sum;

pub use eigen::{hermitian_eigendecompose, Eigendecomposition};
pub use matrix::ComplexMatrix;
pub use quadrature::{adaptive_simpson, quadrature_sinc, sinc, sinc_kappa};
pub use rng::RngStream;
pub use sum::{compensated_sum, compensated_sum_f64};
