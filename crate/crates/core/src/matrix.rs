//! Dense complex vectors and square matrices.
//!
//! Storage is row-major: entry `(i, j)` of an `N x N` matrix lives at
//! `data[i * N + j]`. That ordering is a contract shared with the file
//! formats and the oracle emulation, not an implementation detail.
//!
//! Everything here is exact desk-scale linear algebra on `Complex64`:
//! norms, LU solves and inverses, and (in the `eigen` sibling module)
//! eigendecompositions, the principal logarithm and the matrix
//! exponential.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Entrywise tolerance of the Hermitian-ness check.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A complex vector of dimension >= 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex64>,
}

impl ComplexVector {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        Ok(Self {
            data: vec![Complex64::new(0.0, 0.0); dim],
        })
    }

    pub fn from_vec(data: Vec<Complex64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        Ok(Self { data })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::from_vec(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Standard basis vector `e_k` (zero-based `k`).
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        let mut v = Self::zeros(dim)?;
        if k >= dim {
            return Err(Error::DimensionMismatch { expected: dim, got: k });
        }
        v.data[k] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.data[i]
    }

    pub fn set(&mut self, i: usize, value: Complex64) {
        self.data[i] = value;
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product `<self, other>`, conjugating `self`.
    pub fn dot(&self, other: &Self) -> Complex64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&mut self, factor: Complex64) {
        for z in &mut self.data {
            *z *= factor;
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        out.scale(factor);
        out
    }

    /// `self += factor * other`.
    pub fn axpy(&mut self, factor: Complex64, other: &Self) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += factor * b;
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(Complex64::new(1.0, 0.0), other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(Complex64::new(-1.0, 0.0), other);
        out
    }

    /// Unit-norm copy; errors on (numerically) zero input.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= 1e-300 {
            return Err(Error::ZeroVector);
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    /// Concatenate blocks into one long vector.
    pub fn stack(blocks: &[Self]) -> Result<Self> {
        let mut data = Vec::new();
        for b in blocks {
            data.extend_from_slice(&b.data);
        }
        Self::from_vec(data)
    }
}

/// A dense square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        Ok(Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim).expect("dim >= 1");
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Build from row-major entries; `data.len()` must equal `dim * dim`.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        Ok(m)
    }

    pub fn diag(entries: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(entries.len())?;
        for (i, &z) in entries.iter().enumerate() {
            m.set(i, i, z);
        }
        Ok(m)
    }

    pub fn diag_real(entries: &[f64]) -> Result<Self> {
        let v: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    pub fn from_columns(cols: &[ComplexVector]) -> Result<Self> {
        let dim = cols.len();
        let mut m = Self::zeros(dim)?;
        for (j, c) in cols.iter().enumerate() {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: c.dim(),
                });
            }
            for i in 0..dim {
                m.set(i, j, c.get(i));
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.dim + j] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::from_vec((0..self.dim).map(|i| self.get(i, j)).collect())
            .expect("dim >= 1")
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj()).expect("same dim")
    }

    /// True iff `max_{i,j} |A_ij - conj(A_ji)| <= 1e-12`.
    pub fn is_hermitian(&self) -> bool {
        for i in 0..self.dim {
            for j in i..self.dim {
                if (self.get(i, j) - self.get(j, i).conj()).norm() > HERMITIAN_TOL {
                    return false;
                }
            }
        }
        true
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self { dim: self.dim, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self { dim: self.dim, data }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let data = self.data.iter().map(|z| z * factor).collect();
        Self { dim: self.dim, data }
    }

    /// `A - I`.
    pub fn minus_identity(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            let d = out.get(i, i);
            out.set(i, i, d - Complex64::new(1.0, 0.0));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n).expect("dim >= 1");
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim, v.dim());
        let n = self.dim;
        let mut out = ComplexVector::zeros(n).expect("dim >= 1");
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += self.get(i, j) * v.get(j);
            }
            out.set(i, acc);
        }
        out
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &Self) -> Self {
        let n = self.dim;
        let m = other.dim;
        Self::from_fn(n * m, |i, j| {
            self.get(i / m, j / m) * other.get(i % m, j % m)
        })
        .expect("dim >= 1")
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Spectral norm (largest singular value) to ~1e-10 relative accuracy.
    ///
    /// Hermitian input diagonalizes directly; otherwise the Gram matrix
    /// `A^H A` is diagonalized and the square root of its top eigenvalue
    /// is returned.
    pub fn spectral_norm(&self) -> f64 {
        if self.max_abs_entry() == 0.0 {
            return 0.0;
        }
        if self.is_hermitian() {
            let (eigs, _) = self.eigh().expect("hermitian checked");
            eigs.iter().map(|l| l.abs()).fold(0.0, f64::max)
        } else {
            let gram = self.adjoint().mul(self);
            let (eigs, _) = gram.eigh().expect("gram matrix is hermitian");
            eigs.iter().map(|l| l.max(0.0)).fold(0.0, f64::max).sqrt()
        }
    }

    /// LU factorization with partial pivoting.
    ///
    /// Returns the packed factors and the row permutation, or
    /// `SingularMatrix` when a pivot falls below `n * eps * max|A_ij|`.
    fn lu(&self) -> Result<(Vec<Complex64>, Vec<usize>)> {
        let n = self.dim;
        let mut lu = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let threshold = (n as f64) * f64::EPSILON * self.max_abs_entry();
        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_mag = lu[k * n + k].norm();
            for r in (k + 1)..n {
                let mag = lu[r * n + k].norm();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = r;
                }
            }
            if pivot_mag <= threshold {
                return Err(Error::SingularMatrix);
            }
            if pivot_row != k {
                for j in 0..n {
                    lu.swap(k * n + j, pivot_row * n + j);
                }
                perm.swap(k, pivot_row);
            }
            let pivot = lu[k * n + k];
            for r in (k + 1)..n {
                let factor = lu[r * n + k] / pivot;
                lu[r * n + k] = factor;
                for j in (k + 1)..n {
                    let sub = factor * lu[k * n + j];
                    lu[r * n + j] -= sub;
                }
            }
        }
        Ok((lu, perm))
    }

    fn lu_solve(lu: &[Complex64], perm: &[usize], b: &ComplexVector) -> ComplexVector {
        let n = perm.len();
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = b.get(perm[i]);
            for j in 0..i {
                acc -= lu[i * n + j] * y[j];
            }
            y[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in (i + 1)..n {
                acc -= lu[i * n + j] * y[j];
            }
            y[i] = acc / lu[i * n + i];
        }
        ComplexVector::from_vec(y).expect("dim >= 1")
    }

    /// Solve `A x = b` by LU with partial pivoting.
    pub fn solve(&self, b: &ComplexVector) -> Result<ComplexVector> {
        if b.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: b.dim(),
            });
        }
        let (lu, perm) = self.lu()?;
        Ok(Self::lu_solve(&lu, &perm, b))
    }

    /// Matrix inverse by LU with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let (lu, perm) = self.lu()?;
        let mut out = Self::zeros(n)?;
        for j in 0..n {
            let e = ComplexVector::basis(n, j)?;
            let col = Self::lu_solve(&lu, &perm, &e);
            for i in 0..n {
                out.set(i, j, col.get(i));
            }
        }
        Ok(out)
    }
}

/// Test-only oracles that must stay independent of the production paths
/// they check.
#[cfg(test)]
pub(crate) mod testkit {
    use super::*;

    /// One-sided Jacobi SVD, used as an independent oracle for the
    /// spectral norm. Rotates column pairs of a working copy until all
    /// columns are mutually orthogonal; the column norms are then the
    /// singular values (descending).
    pub(crate) fn svd_values_jacobi(a: &ComplexMatrix) -> Vec<f64> {
        let n = a.dim();
        let mut cols: Vec<ComplexVector> = (0..n).map(|j| a.column(j)).collect();
        for _ in 0..60 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = cols[p].dot(&cols[q]);
                    let app = cols[p].norm().powi(2);
                    let aqq = cols[q].norm().powi(2);
                    off = off.max(apq.norm());
                    if apq.norm() <= 1e-30 {
                        continue;
                    }
                    // Diagonalize the 2x2 Gram block [[app, apq], [conj, aqq]]
                    // by right-multiplying the column pair with the rotation.
                    let phi = apq.arg();
                    let tau = (app - aqq) / (2.0 * apq.norm());
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let cth = 1.0 / (1.0 + t * t).sqrt();
                    let cr = Complex64::new(cth, 0.0);
                    let e_pos = Complex64::from_polar(t * cth, phi);
                    let e_neg = Complex64::from_polar(t * cth, -phi);
                    for i in 0..n {
                        let vp = cols[p].get(i);
                        let vq = cols[q].get(i);
                        cols[p].set(i, cr * vp + e_neg * vq);
                        cols[q].set(i, -e_pos * vp + cr * vq);
                    }
                }
            }
            if off <= 1e-14 * a.frobenius_norm().max(1.0) {
                break;
            }
        }
        let mut sv: Vec<f64> = cols.iter().map(|v| v.norm()).collect();
        sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
        sv
    }
}

#[cfg(test)]
mod tests {
    use super::testkit::svd_values_jacobi;
    use super::*;
    use crate::rng;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn spectral_norm_identity() {
        assert_abs_diff_eq!(ComplexMatrix::identity(2).spectral_norm(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn spectral_norm_diagonal_shift() {
        let a = ComplexMatrix::diag_real(&[1.5, 0.5]).unwrap();
        let shifted = a.minus_identity();
        assert_abs_diff_eq!(shifted.spectral_norm(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn spectral_norm_matches_svd_oracle() {
        for seed in 0..5u64 {
            let mut rng = rng::seeded(1000 + seed);
            let a = ComplexMatrix::from_fn(4, |_, _| {
                c(rng::standard_normal(&mut rng), rng::standard_normal(&mut rng))
            })
            .unwrap();
            let oracle = svd_values_jacobi(&a)[0];
            assert_abs_diff_eq!(a.spectral_norm(), oracle, epsilon = 1e-10 * oracle.max(1.0));
        }
    }

    #[test]
    fn inverse_identity() {
        let inv = ComplexMatrix::identity(4).inverse().unwrap();
        assert!(inv.sub(&ComplexMatrix::identity(4)).max_abs_entry() < 1e-14);
    }

    #[test]
    fn inverse_diagonal() {
        let a = ComplexMatrix::diag_real(&[1.25, 0.75]).unwrap();
        let inv = a.inverse().unwrap();
        assert_abs_diff_eq!(inv.get(0, 0).re, 0.8, epsilon = 1e-14);
        assert_abs_diff_eq!(inv.get(1, 1).re, 4.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn inverse_residual_well_conditioned() {
        let mut rng = rng::seeded(2024);
        // Random Hermitian with spectrum in (0.5, 1.5): comfortably regular.
        let v = rng::haar_unitary(8, rng::derive_seed(2024, 1));
        let eigs: Vec<f64> = (0..8).map(|_| 0.5 + rng::uniform_f64(&mut rng)).collect();
        let a = v.mul(&ComplexMatrix::diag_real(&eigs).unwrap()).mul(&v.adjoint());
        let inv = a.inverse().unwrap();
        let residual = a.mul(&inv).sub(&ComplexMatrix::identity(8));
        let kappa = eigs.iter().cloned().fold(0.0, f64::max)
            / eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(residual.spectral_norm() <= 1e-10 * kappa);
    }

    #[test]
    fn inverse_rejects_singular() {
        let a = ComplexMatrix::diag_real(&[1.0, 0.0]).unwrap();
        assert_eq!(a.inverse().unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn inverse_is_involution_up_to_tolerance() {
        let mut rng = rng::seeded(77);
        let v = rng::haar_unitary(6, 78);
        let eigs: Vec<f64> = (0..6).map(|_| 0.3 + rng::uniform_f64(&mut rng)).collect();
        let a = v.mul(&ComplexMatrix::diag_real(&eigs).unwrap()).mul(&v.adjoint());
        let round_trip = a.inverse().unwrap().inverse().unwrap();
        let kappa = eigs.iter().cloned().fold(0.0, f64::max)
            / eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(round_trip.sub(&a).spectral_norm() <= 1e-8 * kappa * kappa);
    }

    #[test]
    fn hermitian_check_tolerance() {
        let mut a = ComplexMatrix::identity(2);
        a.set(0, 1, c(0.3, 0.5e-13));
        a.set(1, 0, c(0.3, 0.5e-13)); // conj mismatch of 1e-13: still hermitian
        assert!(a.is_hermitian());
        a.set(1, 0, c(0.3, 1e-11));
        assert!(!a.is_hermitian());
    }

    #[test]
    fn solve_matches_inverse() {
        let a = ComplexMatrix::from_vec(
            2,
            vec![c(1.0, 0.0), c(0.3, 0.1), c(0.3, -0.1), c(1.2, 0.0)],
        )
        .unwrap();
        let b = ComplexVector::from_real(&[1.0, -2.0]).unwrap();
        let x = a.solve(&b).unwrap();
        let residual = a.mul_vec(&x).sub(&b);
        assert!(residual.norm() < 1e-12);
    }

    #[test]
    fn kron_dimensions_and_entries() {
        let x = ComplexMatrix::from_vec(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let i2 = ComplexMatrix::identity(2);
        let k = x.kron(&i2);
        assert_eq!(k.dim(), 4);
        assert_eq!(k.get(0, 2), c(1.0, 0.0));
        assert_eq!(k.get(1, 3), c(1.0, 0.0));
        assert_eq!(k.get(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn zero_dim_rejected() {
        assert!(ComplexMatrix::zeros(0).is_err());
        assert!(ComplexVector::zeros(0).is_err());
    }
}
