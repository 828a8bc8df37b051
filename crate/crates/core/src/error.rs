//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by the numeric kernel and the physics layers on top of it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("matrix is not Hermitian: |A - A^H|_F = {residual:.3e} exceeds tol*|A|_F = {bound:.3e}")]
    NotHermitian { residual: f64, bound: f64 },

    #[error("eigensolver did not converge in {sweeps} sweeps (off-diagonal norm {residual:.3e})")]
    NoConvergence { residual: f64, sweeps: usize },

    #[error("spectrum not strictly positive after offset: min eigenvalue {min_energy:.6e}; increase energy_offset")]
    NonPositiveSpectrum { min_energy: f64 },

    #[error("basis is not unitary: |B^H B - I|_F = {residual:.3e}")]
    NotUnitary { residual: f64 },

    #[error("state is not normalized: sum |c_n|^2 = {norm_sqr:.12}")]
    NotNormalized { norm_sqr: f64 },

    #[error("period must be positive, got {period}")]
    NonPositivePeriod { period: f64 },

    #[error("integration bound must lie in [0, 10*pi], got {upper}")]
    BadIntegrationBound { upper: f64 },

    #[error("quadrature tolerance must be at least 1e-14, got {tol:.3e}")]
    ToleranceTooTight { tol: f64 },

    #[error("interval is reversed: lo = {lo} > hi = {hi}")]
    ReversedInterval { lo: f64, hi: f64 },

    #[error("experiment duration must be nonnegative, got {t_e}")]
    NegativeDuration { t_e: f64 },

    #[error("sampling window {window:.3e} is below the required minimum {required:.3e}")]
    WindowTooSmall { window: f64, required: f64 },

    #[error("phase sample holds {sample_modes} modes but the system has {system_modes}")]
    StaleSample {
        sample_modes: usize,
        system_modes: usize,
    },

    #[error("need at least {required} samples, got {got}")]
    TooFewSamples { required: usize, got: usize },

    #[error("ensemble needs at least one shot")]
    EmptyEnsemble,

    #[error("lattice size {n_sites} is not a power of two in [8, 4096]")]
    BadLatticeSize { n_sites: usize },

    #[error("lattice parameter {name} must be positive, got {value}")]
    BadLatticeParameter { name: &'static str, value: f64 },

    #[error("scan times must be positive and ascending")]
    BadScanGrid,

    #[error("worker pool setup failed: {message}")]
    WorkerPool { message: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("entries must be finite (found NaN or infinity)")]
    NonFiniteEntry,
}

pub type Result<T> = std::result::Result<T, Error>;
