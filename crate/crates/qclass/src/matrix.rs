//! Dense square complex matrices at desk scale.
//!
//! Everything downstream works with operators on a finite-dimensional
//! complex Hilbert space, so the only matrix shape in the crate is
//! square. Storage is row-major `Vec<Complex64>`.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};

/// Complex number with `f64` components.
pub type Complex64 = Complex<f64>;

/// A square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries; `data.len()` must be `dim * dim`.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::NotSquare {
                rows: dim,
                cols: data.len().checked_div(dim).unwrap_or(0),
            });
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from nested rows of entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        for r in rows {
            if r.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: r.len(),
                });
            }
        }
        let data = rows.iter().flatten().copied().collect();
        Self::new(dim, data)
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(dim: usize, reals: &[f64]) -> Result<Self> {
        Self::new(dim, reals.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn diagonal(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        m
    }

    /// The projector |v⟩⟨v| of a (not necessarily normalized) state vector.
    pub fn from_pure_state(amplitudes: &[Complex64]) -> Result<Self> {
        let dim = amplitudes.len();
        let norm_sq: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if dim == 0 || norm_sq <= 0.0 || !norm_sq.is_finite() {
            return Err(Error::ZeroTrace);
        }
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, amplitudes[i] * amplitudes[j].conj() / norm_sq);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Errors with the offending index if any entry is NaN or infinite.
    pub fn check_finite(&self) -> Result<()> {
        for row in 0..self.dim {
            for col in 0..self.dim {
                let z = self.get(row, col);
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row, col });
                }
            }
        }
        Ok(())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// tr(self · other) without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        debug_assert_eq!(self.dim, other.dim);
        let mut t = Complex64::new(0.0, 0.0);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t += self.get(i, j) * other.get(j, i);
            }
        }
        t
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// (M + M†)/2, the Hermitian part.
    pub fn hermitian_part(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v = (self.get(i, j) + self.get(j, i).conj()) * 0.5;
                out.set(i, j, v);
            }
        }
        out
    }

    /// Largest deviation from Hermitian symmetry, max |M_ij - conj(M_ji)|.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Entrywise max modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }

    /// Entrywise max modulus of the difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(other.data.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..d {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Kronecker product self ⊗ other.
    pub fn kron(&self, other: &Self) -> Self {
        let d = self.dim * other.dim;
        let mut out = Self::zeros(d);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.get(i, j);
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        out.set(i * other.dim + k, j * other.dim + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Max-norm of the commutator [self, other].
    pub fn commutator_norm(&self, other: &Self) -> f64 {
        self.matmul(other).max_diff(&other.matmul(self))
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, other: &ComplexMatrix) -> ComplexMatrix {
        debug_assert_eq!(self.dim, other.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, other: &ComplexMatrix) -> ComplexMatrix {
        debug_assert_eq!(self.dim, other.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, other: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_trace_and_kron() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.trace(), Complex64::new(2.0, 0.0));
        let i4 = i2.kron(&i2);
        assert_eq!(i4.dim(), 4);
        assert!(i4.max_diff(&ComplexMatrix::identity(4)) == 0.0);
    }

    #[test]
    fn adjoint_and_asymmetry() {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)],
        ])
        .unwrap();
        assert!((m.asymmetry() - 1.0).abs() < 1e-15);
        let h = m.hermitian_part();
        assert_eq!(h.asymmetry(), 0.0);
        assert_eq!(h.adjoint(), h);
    }

    #[test]
    fn trace_product_matches_product_trace() {
        let a = ComplexMatrix::from_rows(&[
            vec![Complex64::new(1.0, 2.0), Complex64::new(0.5, -1.0)],
            vec![Complex64::new(-0.25, 0.0), Complex64::new(0.0, 3.0)],
        ])
        .unwrap();
        let b = a.adjoint();
        let direct = a.matmul(&b).trace();
        let fast = a.trace_product(&b);
        assert!((direct - fast).norm() < 1e-14);
    }

    #[test]
    fn pure_state_projector_is_idempotent() {
        let v = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let p = ComplexMatrix::from_pure_state(&v).unwrap();
        assert!((p.trace().re - 1.0).abs() < 1e-15);
        assert!(p.matmul(&p).max_diff(&p) < 1e-15);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(ComplexMatrix::new(2, vec![Complex64::new(0.0, 0.0); 3]).is_err());
        assert!(ComplexMatrix::from_rows(&[vec![Complex64::new(0.0, 0.0); 2]]).is_err());
    }
}
