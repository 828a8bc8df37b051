//! Dense complex matrix in row-major order.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, row-major. Entries are kept finite; constructors
/// reject NaN and infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        assert!(rows >= 1 && cols >= 1, "dimensions must be at least 1");
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "dimensions must be at least 1");
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(d, 0.0));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.cols + col] = value;
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Column `col` as an owned vector.
    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let cur = out.get(r, c);
                    out.set(r, c, cur + a * rhs.get(k, c));
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: v.len(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for r in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..self.cols {
                acc += self.get(r, c) * v[c];
            }
            out[r] = acc;
        }
        Ok(out)
    }

    /// Adjoint-vector product `self^H * v` without forming the adjoint.
    pub fn adjoint_mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.rows != v.len() {
            return Err(Error::DimensionMismatch {
                left: self.rows,
                right: v.len(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.cols];
        for c in 0..self.cols {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..self.rows {
                acc += self.get(r, c).conj() * v[r];
            }
            out[c] = acc;
        }
        Ok(out)
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius norm of `self - rhs`.
    pub fn frobenius_distance(&self, rhs: &Self) -> f64 {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.cols, rhs.cols);
        self.entries
            .iter()
            .zip(rhs.entries.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `|A - A^H|_F`, zero for an exactly Hermitian matrix.
    pub fn hermitian_residual(&self) -> f64 {
        assert!(self.is_square());
        let mut acc = 0.0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let d = self.get(r, c) - self.get(c, r).conj();
                acc += d.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Symmetrizes in place: `A <- (A + A^H) / 2`.
    pub fn symmetrize(&mut self) {
        assert!(self.is_square());
        for r in 0..self.rows {
            for c in r..self.cols {
                let avg = (self.get(r, c) + self.get(c, r).conj()) * 0.5;
                self.set(r, c, avg);
                self.set(c, r, avg.conj());
            }
        }
    }

    /// `|B^H B - I|_F`; zero for a unitary matrix.
    pub fn unitarity_residual(&self) -> f64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc = 0.0;
        for a in 0..n {
            for b in 0..n {
                let mut dot = Complex64::new(0.0, 0.0);
                for r in 0..n {
                    dot += self.get(r, a).conj() * self.get(r, b);
                }
                if a == b {
                    dot -= Complex64::new(1.0, 0.0);
                }
                acc += dot.norm_sqr();
            }
        }
        acc.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_finite_entries() {
        let err = ComplexMatrix::from_entries(1, 2, vec![c(1.0, 0.0), c(f64::NAN, 0.0)]);
        assert_eq!(err.unwrap_err(), Error::NonFiniteEntry);
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let m = ComplexMatrix::from_entries(2, 2, vec![c(1.0, 2.0), c(3.0, 4.0), c(5.0, 6.0), c(7.0, 8.0)])
            .unwrap();
        let a = m.adjoint();
        assert_eq!(a.get(0, 1), c(5.0, -6.0));
        assert_eq!(a.get(1, 0), c(3.0, -4.0));
    }

    #[test]
    fn identity_is_unitary_and_hermitian() {
        let id = ComplexMatrix::identity(4);
        assert_eq!(id.unitarity_residual(), 0.0);
        assert_eq!(id.hermitian_residual(), 0.0);
    }

    #[test]
    fn mul_matches_hand_computation() {
        let a = ComplexMatrix::from_entries(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let v = a.mul_vec(&[c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        assert_eq!(v, vec![c(3.0, 0.0), c(2.0, 0.0)]);
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq, ComplexMatrix::identity(2));
    }

    #[test]
    fn symmetrize_makes_exactly_hermitian() {
        let mut m =
            ComplexMatrix::from_entries(2, 2, vec![c(1.0, 1e-13), c(0.5, 0.25), c(0.5, -0.25 + 1e-13), c(2.0, 0.0)])
                .unwrap();
        m.symmetrize();
        assert_eq!(m.hermitian_residual(), 0.0);
        assert_eq!(m.get(0, 0).im, 0.0);
    }
}
