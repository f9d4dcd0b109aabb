//! Eigendecompositions and the matrix functions built on them.
//!
//! Hermitian matrices go through cyclic complex Jacobi rotations, which
//! converge to machine precision at desk scale and come with a unitary
//! eigenbasis for free. General (diagonalizable) matrices go through a
//! Householder Hessenberg reduction followed by an explicitly shifted
//! complex QR iteration to Schur form, with eigenvectors recovered by
//! back-substitution on the triangular factor.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ComplexVector};

/// Eigenvector condition numbers above this reject the decomposition
/// as a basis for matrix functions.
const EIGENBASIS_KAPPA_MAX: f64 = 1e6;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl ComplexMatrix {
    /// Eigendecomposition of a Hermitian matrix by cyclic Jacobi.
    ///
    /// Returns eigenvalues in ascending order and a unitary matrix whose
    /// columns are the matching eigenvectors, so that `A V = V diag(l)`
    /// holds within `1e-10 * ||A||`.
    pub fn eigh(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        if !self.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        let n = self.dim();
        // The Hermitian check is an absolute 1e-12 tolerance; symmetrize so
        // the rotations see an exactly Hermitian matrix and always converge.
        let mut a = ComplexMatrix::from_fn(n, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        })?;
        let mut v = ComplexMatrix::identity(n);
        let fro = a.frobenius_norm().max(f64::MIN_POSITIVE);
        for _sweep in 0..100 {
            let mut off = 0.0f64;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += a.get(i, j).norm_sqr();
                }
            }
            if (2.0 * off).sqrt() <= 1e-14 * fro {
                let mut eigs: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&x, &y| eigs[x].partial_cmp(&eigs[y]).unwrap());
                eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
                let vecs = ComplexMatrix::from_fn(n, |i, j| v.get(i, order[j]))?;
                return Ok((eigs, vecs));
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let beta = a.get(p, q);
                    if beta.norm() <= 1e-300 {
                        continue;
                    }
                    let alpha = a.get(p, p).re;
                    let gamma = a.get(q, q).re;
                    let phi = beta.arg();
                    // tan(2 theta) = 2|beta| / (alpha - gamma), smaller root.
                    let tau = (alpha - gamma) / (2.0 * beta.norm());
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let e_pos = Complex64::from_polar(s, phi);
                    let e_neg = Complex64::from_polar(s, -phi);
                    let cr = Complex64::new(c, 0.0);
                    // A <- J^H A J with J = [[c, -s e^{i phi}], [s e^{-i phi}, c]].
                    for k in 0..n {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        a.set(k, p, cr * akp + e_neg * akq);
                        a.set(k, q, -e_pos * akp + cr * akq);
                    }
                    for k in 0..n {
                        let apk = a.get(p, k);
                        let aqk = a.get(q, k);
                        a.set(p, k, cr * apk + e_pos * aqk);
                        a.set(q, k, -e_neg * apk + cr * aqk);
                    }
                    for k in 0..n {
                        let vkp = v.get(k, p);
                        let vkq = v.get(k, q);
                        v.set(k, p, cr * vkp + e_neg * vkq);
                        v.set(k, q, -e_pos * vkp + cr * vkq);
                    }
                }
            }
        }
        Err(Error::ConvergenceFailure {
            what: "jacobi eigendecomposition",
        })
    }

    /// Reduce to upper Hessenberg form by Householder reflections.
    /// Returns `(H, Q)` with `A = Q H Q^H` and `Q` unitary.
    fn hessenberg(&self) -> (ComplexMatrix, ComplexMatrix) {
        let n = self.dim();
        let mut h = self.clone();
        let mut q = ComplexMatrix::identity(n);
        if n < 3 {
            return (h, q);
        }
        for k in 0..(n - 2) {
            let m = n - k - 1;
            let mut x: Vec<Complex64> = (0..m).map(|i| h.get(k + 1 + i, k)).collect();
            let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if xnorm <= 1e-300 {
                continue;
            }
            let phase = if x[0].norm() > 0.0 {
                x[0] / x[0].norm()
            } else {
                ONE
            };
            let alpha = -phase * xnorm;
            x[0] -= alpha;
            let vnorm2: f64 = x.iter().map(|z| z.norm_sqr()).sum();
            if vnorm2 <= 1e-300 {
                continue;
            }
            let beta = 2.0 / vnorm2;
            let v = x;
            // Rows k+1..n: H <- P H.
            for j in 0..n {
                let mut w = ZERO;
                for (i, vi) in v.iter().enumerate() {
                    w += vi.conj() * h.get(k + 1 + i, j);
                }
                w *= beta;
                for (i, vi) in v.iter().enumerate() {
                    let val = h.get(k + 1 + i, j) - vi * w;
                    h.set(k + 1 + i, j, val);
                }
            }
            // Columns k+1..n: H <- H P, Q <- Q P.
            for i in 0..n {
                let mut w = ZERO;
                for (j, vj) in v.iter().enumerate() {
                    w += h.get(i, k + 1 + j) * vj;
                }
                w *= beta;
                for (j, vj) in v.iter().enumerate() {
                    let val = h.get(i, k + 1 + j) - w * vj.conj();
                    h.set(i, k + 1 + j, val);
                }
            }
            for i in 0..n {
                let mut w = ZERO;
                for (j, vj) in v.iter().enumerate() {
                    w += q.get(i, k + 1 + j) * vj;
                }
                w *= beta;
                for (j, vj) in v.iter().enumerate() {
                    let val = q.get(i, k + 1 + j) - w * vj.conj();
                    q.set(i, k + 1 + j, val);
                }
            }
        }
        (h, q)
    }

    /// Complex Schur decomposition `A = Q T Q^H` with `T` upper triangular.
    fn schur(&self) -> Result<(ComplexMatrix, ComplexMatrix)> {
        let n = self.dim();
        let (mut t, mut q) = self.hessenberg();
        let eps = f64::EPSILON;
        let mut hi = n - 1;
        let mut stall = 0usize;
        let mut total = 0usize;
        let budget = 60 * n * n + 200;
        while hi > 0 {
            for i in 1..=hi {
                let sub = t.get(i, i - 1).norm();
                if sub <= eps * (t.get(i - 1, i - 1).norm() + t.get(i, i).norm()) {
                    t.set(i, i - 1, ZERO);
                }
            }
            if t.get(hi, hi - 1) == ZERO {
                hi -= 1;
                stall = 0;
                continue;
            }
            let mut lo = hi;
            while lo >= 1 && t.get(lo, lo - 1) != ZERO {
                lo -= 1;
            }
            total += 1;
            stall += 1;
            if total > budget {
                return Err(Error::ConvergenceFailure { what: "qr iteration" });
            }
            let mu = if stall % 16 == 0 {
                // Exceptional shift to break rare symmetric stalls.
                t.get(hi, hi) + Complex64::new(1.5 * t.get(hi, hi - 1).norm(), 0.0)
            } else {
                wilkinson_shift(&t, hi)
            };
            for k in lo..=hi {
                let d = t.get(k, k);
                t.set(k, k, d - mu);
            }
            let mut rotations: Vec<(usize, f64, Complex64)> = Vec::with_capacity(hi - lo);
            for i in lo..hi {
                let (c, s) = givens(t.get(i, i), t.get(i + 1, i));
                rotate_rows(&mut t, i, c, s);
                rotations.push((i, c, s));
            }
            for &(i, c, s) in &rotations {
                rotate_cols(&mut t, i, c, s);
                rotate_cols(&mut q, i, c, s);
            }
            for k in lo..=hi {
                let d = t.get(k, k);
                t.set(k, k, d + mu);
            }
        }
        for i in 0..n {
            for j in 0..i {
                t.set(i, j, ZERO);
            }
        }
        Ok((t, q))
    }

    /// Eigendecomposition of a general (diagonalizable) matrix.
    ///
    /// Returns eigenvalues (Schur diagonal order) and the matrix of right
    /// eigenvectors, normalized to unit columns. The eigenvector matrix
    /// of a defective or nearly defective input is ill-conditioned;
    /// callers that invert it should check its condition number.
    pub fn eig(&self) -> Result<(Vec<Complex64>, ComplexMatrix)> {
        let n = self.dim();
        let (t, q) = self.schur()?;
        let eigs: Vec<Complex64> = (0..n).map(|i| t.get(i, i)).collect();
        let scale = t.frobenius_norm().max(f64::MIN_POSITIVE);
        let mut vecs = ComplexMatrix::zeros(n)?;
        for k in 0..n {
            let mut y = vec![ZERO; n];
            y[k] = ONE;
            for i in (0..k).rev() {
                let mut acc = ZERO;
                for (j, yj) in y.iter().enumerate().take(k + 1).skip(i + 1) {
                    acc += t.get(i, j) * yj;
                }
                let mut den = eigs[k] - t.get(i, i);
                if den.norm() < f64::EPSILON * scale {
                    // Clustered eigenvalue: nudge the denominator so the
                    // solve stays finite; conditioning is checked upstream.
                    den = Complex64::new(f64::EPSILON * scale, 0.0);
                }
                y[i] = acc / den;
            }
            let yv = ComplexVector::from_vec(y)?;
            let col = q.mul_vec(&yv);
            let nrm = col.norm();
            for i in 0..n {
                vecs.set(i, k, col.get(i) / nrm);
            }
        }
        Ok((eigs, vecs))
    }

    /// Principal matrix logarithm through eigendecomposition.
    ///
    /// Hermitian input diagonalizes unitarily; anything else goes through
    /// the general eigensolver and requires an eigenbasis with condition
    /// number below `1e6`. Eigenvalues on the closed negative real axis
    /// (including zero) are rejected.
    pub fn principal_log(&self) -> Result<ComplexMatrix> {
        if self.is_hermitian() {
            let (eigs, v) = self.eigh()?;
            let scale = eigs.iter().map(|l| l.abs()).fold(0.0, f64::max).max(1.0);
            if eigs.iter().any(|&l| l <= 1e-14 * scale) {
                return Err(Error::EigOnNegativeRealAxis);
            }
            let logs: Vec<Complex64> = eigs.iter().map(|&l| Complex64::new(l.ln(), 0.0)).collect();
            let d = ComplexMatrix::diag(&logs)?;
            return Ok(v.mul(&d).mul(&v.adjoint()));
        }
        let (eigs, v) = self.eig()?;
        let scale = eigs.iter().map(|l| l.norm()).fold(0.0, f64::max).max(1.0);
        for l in &eigs {
            if l.re <= 0.0 && l.im.abs() <= 1e-12 * scale {
                return Err(Error::EigOnNegativeRealAxis);
            }
        }
        let vinv = v.inverse().map_err(|_| Error::IllConditionedEigenbasis {
            kappa: f64::INFINITY,
        })?;
        let kappa = v.spectral_norm() * vinv.spectral_norm();
        if kappa > EIGENBASIS_KAPPA_MAX {
            return Err(Error::IllConditionedEigenbasis { kappa });
        }
        let logs: Vec<Complex64> = eigs.iter().map(|l| l.ln()).collect();
        let d = ComplexMatrix::diag(&logs)?;
        Ok(v.mul(&d).mul(&vinv))
    }

    /// Matrix exponential by scaling-and-squaring on the Taylor series.
    ///
    /// Deliberately independent of the eigendecomposition path so it can
    /// serve as a round-trip check for `principal_log`.
    pub fn expm(&self) -> ComplexMatrix {
        let n = self.dim();
        let nrm = self.frobenius_norm();
        let squarings = if nrm > 0.5 {
            (nrm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let b = self.scaled(Complex64::new(0.5f64.powi(squarings as i32), 0.0));
        let mut result = ComplexMatrix::identity(n);
        let mut term = ComplexMatrix::identity(n);
        for k in 1..=24 {
            term = term.mul(&b).scaled(Complex64::new(1.0 / k as f64, 0.0));
            result = result.add(&term);
            if term.frobenius_norm() <= 1e-18 * result.frobenius_norm() {
                break;
            }
        }
        for _ in 0..squarings {
            result = result.mul(&result);
        }
        result
    }

    /// Square root of a Hermitian positive semidefinite matrix.
    ///
    /// Tiny negative eigenvalues from rounding are clamped to zero.
    pub fn sqrt_psd(&self) -> Result<ComplexMatrix> {
        let (eigs, v) = self.eigh()?;
        let roots: Vec<Complex64> = eigs
            .iter()
            .map(|&l| Complex64::new(l.max(0.0).sqrt(), 0.0))
            .collect();
        let d = ComplexMatrix::diag(&roots)?;
        Ok(v.mul(&d).mul(&v.adjoint()))
    }
}

/// Eigenvalue of the trailing 2x2 block closest to the corner entry.
fn wilkinson_shift(t: &ComplexMatrix, hi: usize) -> Complex64 {
    let a = t.get(hi - 1, hi - 1);
    let b = t.get(hi - 1, hi);
    let c = t.get(hi, hi - 1);
    let d = t.get(hi, hi);
    let mid = (a + d) * Complex64::new(0.5, 0.0);
    let rad = ((a - d) * (a - d) * Complex64::new(0.25, 0.0) + b * c).sqrt();
    let e1 = mid + rad;
    let e2 = mid - rad;
    if (e1 - d).norm() <= (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

/// Unitary Givens pair `(c, s)` with `c` real so that
/// `[[c, s], [-conj(s), c]] (x, y)^T = (r, 0)^T`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ynorm = y.norm();
    if ynorm == 0.0 {
        return (1.0, ZERO);
    }
    let xnorm = x.norm();
    if xnorm == 0.0 {
        return (0.0, y.conj() / ynorm);
    }
    let d = (xnorm * xnorm + ynorm * ynorm).sqrt();
    let c = xnorm / d;
    let s = (x / xnorm) * y.conj() / d;
    (c, s)
}

fn rotate_rows(t: &mut ComplexMatrix, i: usize, c: f64, s: Complex64) {
    let n = t.dim();
    let cr = Complex64::new(c, 0.0);
    for j in 0..n {
        let xi = t.get(i, j);
        let yi = t.get(i + 1, j);
        t.set(i, j, cr * xi + s * yi);
        t.set(i + 1, j, -s.conj() * xi + cr * yi);
    }
}

fn rotate_cols(t: &mut ComplexMatrix, i: usize, c: f64, s: Complex64) {
    let n = t.dim();
    let cr = Complex64::new(c, 0.0);
    for k in 0..n {
        let xi = t.get(k, i);
        let yi = t.get(k, i + 1);
        t.set(k, i, cr * xi + s.conj() * yi);
        t.set(k, i + 1, -s * xi + cr * yi);
    }
}
