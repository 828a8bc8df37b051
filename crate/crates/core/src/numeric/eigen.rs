//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation first phase-rotates the pivot pair so the off-diagonal
//! element becomes real, then applies the classic symmetric Jacobi rotation.
//! The accumulated transform is unitary by construction, which is the main
//! reason this solver was picked over QR for desk-scale problems.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::ComplexMatrix;

/// Largest matrix dimension the solver accepts.
pub const MAX_EIGEN_DIM: usize = 1024;

const MAX_SWEEPS: usize = 100;

/// Result of [`hermitian_eigendecompose`]: `a = vectors * diag(values) * vectors^H`.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose k-th column is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

/// Diagonalizes a Hermitian matrix with cyclic Jacobi rotations.
///
/// The input must be Hermitian within `tol * |a|_F`; it is then symmetrized
/// so the iteration operates on an exactly Hermitian operand. Eigenvalues
/// come back sorted ascending, ties keeping the converged-basis order.
pub fn hermitian_eigendecompose(a: &ComplexMatrix, tol: f64) -> Result<Eigendecomposition> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n > MAX_EIGEN_DIM {
        return Err(Error::DimensionTooLarge {
            dim: n,
            max: MAX_EIGEN_DIM,
        });
    }

    let norm = a.frobenius_norm();
    let residual = a.hermitian_residual();
    if residual > tol * norm {
        return Err(Error::NotHermitian {
            residual,
            bound: tol * norm,
        });
    }

    let mut work = a.clone();
    work.symmetrize();
    let mut vectors = ComplexMatrix::identity(n);

    // Rotations stop once every off-diagonal entry is negligible at machine
    // precision relative to the matrix scale.
    let off_target = 1e-14 * norm.max(f64::MIN_POSITIVE);

    let mut converged = n == 1;
    for _sweep in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&work);
        if off <= off_target {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(&mut work, &mut vectors, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&work) > off_target {
        return Err(Error::NoConvergence {
            residual: off_diagonal_norm(&work),
            sweeps: MAX_SWEEPS,
        });
    }

    // Sort ascending; stable in the converged-basis order for ties.
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| work.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut sorted = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            sorted.set(r, dst, vectors.get(r, src));
        }
    }

    Ok(Eigendecomposition {
        values,
        vectors: sorted,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                acc += a.get(p, q).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One Jacobi rotation annihilating the (p, q) entry.
///
/// With `a_pq = |a_pq| e^{i phi}`, the unitary
/// `R = [[c e^{i phi}, s e^{i phi}], [-s, c]]` (acting on the p/q plane)
/// reduces the pivot to the real symmetric case solved by the Numerical
/// Recipes rotation.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let abs_apq = apq.norm();
    if abs_apq == 0.0 {
        return;
    }
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let phase = apq / abs_apq;

    // Real rotation parameters for [[app, |apq|], [|apq|, aqq]].
    let theta = (aqq - app) / (2.0 * abs_apq);
    let t = if theta >= 0.0 {
        1.0 / (theta + (1.0 + theta * theta).sqrt())
    } else {
        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let rpp = phase * c;
    let rpq = phase * s;
    let rqp = Complex64::new(-s, 0.0);
    let rqq = Complex64::new(c, 0.0);

    let n = a.rows();

    // A <- R^H A (rows p and q).
    for col in 0..n {
        let xp = a.get(p, col);
        let xq = a.get(q, col);
        a.set(p, col, rpp.conj() * xp + rqp.conj() * xq);
        a.set(q, col, rpq.conj() * xp + rqq.conj() * xq);
    }
    // A <- A R (columns p and q).
    for row in 0..n {
        let xp = a.get(row, p);
        let xq = a.get(row, q);
        a.set(row, p, xp * rpp + xq * rqp);
        a.set(row, q, xp * rpq + xq * rqq);
    }
    // Pin the entries the rotation is meant to produce exactly.
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    a.set(p, p, Complex64::new(app - t * abs_apq, 0.0));
    a.set(q, q, Complex64::new(aqq + t * abs_apq, 0.0));

    // V <- V R accumulates eigenvectors in the columns.
    for row in 0..n {
        let xp = v.get(row, p);
        let xq = v.get(row, q);
        v.set(row, p, xp * rpp + xq * rqp);
        v.set(row, q, xp * rpq + xq * rqq);
    }
}
