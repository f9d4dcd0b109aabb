//! Block-encodings of `A/alpha` and of `A - I`.
//!
//! A block-encoding is a unitary whose top-left corner (all ancillas at
//! `|0>`) equals the target matrix divided by a subnormalization. The
//! unitary dilation here realizes `A/alpha` with one ancilla; the shift
//! construction sandwiches it between single-qubit rotations `G` to
//! produce an encoding of `(A - I) / (1 + alpha)` on one more ancilla.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Unitarity tolerance for encodings, in spectral norm.
pub const UNITARY_TOL: f64 = 1e-11;

/// A unitary `U` whose corner encodes `(A - I) / (1 + alpha)`.
#[derive(Debug, Clone)]
pub struct BlockEncoding {
    u: ComplexMatrix,
    alpha: f64,
    ancillas: usize,
    system_dim: usize,
}

impl BlockEncoding {
    /// The encoding unitary of dimension `2^(a+1) * N`.
    pub fn unitary(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Total ancilla qubits (the `a` of `U_A` plus the shift qubit).
    pub fn ancilla_qubits(&self) -> usize {
        self.ancillas
    }

    /// System dimension `N`.
    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    /// Subnormalization `1 + alpha`.
    pub fn subnormalization(&self) -> f64 {
        1.0 + self.alpha
    }

    /// Top-left `N x N` corner (all ancillas at `|0>`).
    pub fn corner(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.system_dim, |i, j| self.u.get(i, j)).expect("n >= 1")
    }

    /// `(1 + alpha) * corner`, the encoded matrix itself.
    pub fn encoded_matrix(&self) -> ComplexMatrix {
        self.corner().scaled(Complex64::new(self.subnormalization(), 0.0))
    }
}

/// Hermitian unitary dilation of `A/alpha` with a single ancilla:
/// `[[B, S], [S, -B]]` for `B = A/alpha`, `S = sqrt(I - B^2)`.
///
/// Requires Hermitian `A` and `alpha >= ||A||` so that `||B|| <= 1`.
pub fn unitary_dilation(a: &ComplexMatrix, alpha: f64) -> Result<ComplexMatrix> {
    if !a.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let norm = a.spectral_norm();
    if alpha <= 0.0 || alpha + 1e-12 < norm {
        return Err(Error::AlphaTooSmall { alpha, norm });
    }
    let n = a.dim();
    let b = a.scaled(Complex64::new(1.0 / alpha, 0.0));
    let s = ComplexMatrix::identity(n).sub(&b.mul(&b)).sqrt_psd()?;
    ComplexMatrix::from_fn(2 * n, |i, j| match (i < n, j < n) {
        (true, true) => b.get(i, j),
        (true, false) => s.get(i, j - n),
        (false, true) => s.get(i - n, j),
        (false, false) => -b.get(i - n, j - n),
    })
}

/// Shift a block-encoding `U_A` of `A/alpha` into one of `A - I`.
///
/// With `G = (1/sqrt(1+alpha)) [[sqrt(alpha), -1], [1, sqrt(alpha)]]`
/// and `V = |0><0| (x) U_A - |1><1| (x) I`, the sandwich
/// `U = (G^H (x) I) V (G (x) I)` satisfies
/// `(1 + alpha) <0^(a+1)| U |0^(a+1)> = A - I`.
pub fn shift_encoding(u_a: &ComplexMatrix, alpha: f64, system_dim: usize) -> Result<BlockEncoding> {
    let d = u_a.dim();
    if system_dim == 0 || d % system_dim != 0 || !(d / system_dim).is_power_of_two() {
        return Err(Error::DimensionMismatch {
            expected: system_dim,
            got: d,
        });
    }
    let gram_residual = u_a
        .adjoint()
        .mul(u_a)
        .sub(&ComplexMatrix::identity(d))
        .spectral_norm();
    if gram_residual > UNITARY_TOL {
        return Err(Error::NotUnitary);
    }
    if alpha <= 0.0 {
        return Err(Error::AlphaTooSmall { alpha, norm: 0.0 });
    }
    let ua_ancillas = (d / system_dim).trailing_zeros() as usize;
    let root = alpha.sqrt();
    let scale = 1.0 / (1.0 + alpha).sqrt();
    let g = ComplexMatrix::from_vec(
        2,
        alloc::vec![
            Complex64::new(root * scale, 0.0),
            Complex64::new(-scale, 0.0),
            Complex64::new(scale, 0.0),
            Complex64::new(root * scale, 0.0),
        ],
    )?;
    let v = ComplexMatrix::from_fn(2 * d, |i, j| {
        if i < d && j < d {
            u_a.get(i, j)
        } else if i >= d && j >= d && i == j {
            Complex64::new(-1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })?;
    let g_wide = g.kron(&ComplexMatrix::identity(d));
    let u = g_wide.adjoint().mul(&v).mul(&g_wide);
    Ok(BlockEncoding {
        u,
        alpha,
        ancillas: ua_ancillas + 1,
        system_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use approx::assert_abs_diff_eq;

    #[test]
    fn dilation_of_zero_matrix_is_swap() {
        let z = ComplexMatrix::zeros(2).unwrap();
        let u = unitary_dilation(&z, 1.0).unwrap();
        // [[0, I], [I, 0]].
        for i in 0..2 {
            assert_abs_diff_eq!(u.get(i, i + 2).re, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(u.get(i + 2, i).re, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(u.get(i, i).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn dilation_of_identity_is_diagonal_sign() {
        let u = unitary_dilation(&ComplexMatrix::identity(2), 1.0).unwrap();
        for i in 0..2 {
            assert_abs_diff_eq!(u.get(i, i).re, 1.0, epsilon = 1e-11);
            assert_abs_diff_eq!(u.get(i + 2, i + 2).re, -1.0, epsilon = 1e-11);
            assert!(u.get(i, i + 2).norm() < 1e-11);
        }
    }

    #[test]
    fn dilation_corner_and_unitarity() {
        let a = ComplexMatrix::diag_real(&[1.5, 0.5]).unwrap();
        let u = unitary_dilation(&a, 2.0).unwrap();
        assert_abs_diff_eq!(u.get(0, 0).re, 0.75, epsilon = 1e-11);
        assert_abs_diff_eq!(u.get(1, 1).re, 0.25, epsilon = 1e-11);
        let residual = u.adjoint().mul(&u).sub(&ComplexMatrix::identity(4));
        assert!(residual.spectral_norm() <= 1e-11);
        // Hermitian by construction as well.
        assert!(u.is_hermitian());
    }

    #[test]
    fn dilation_rejects_bad_inputs() {
        let a = ComplexMatrix::diag_real(&[1.5, 0.5]).unwrap();
        assert!(matches!(
            unitary_dilation(&a, 1.0).unwrap_err(),
            Error::AlphaTooSmall { .. }
        ));
        let skew = ComplexMatrix::from_vec(
            2,
            alloc::vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(unitary_dilation(&skew, 2.0).unwrap_err(), Error::NotHermitian);
    }

    #[test]
    fn shift_encoding_of_identity_has_zero_corner() {
        let u_a = unitary_dilation(&ComplexMatrix::identity(2), 1.0).unwrap();
        let enc = shift_encoding(&u_a, 1.0, 2).unwrap();
        assert!(enc.encoded_matrix().max_abs_entry() < 1e-11);
    }

    #[test]
    fn shift_encoding_diagonal_example() {
        let a = ComplexMatrix::diag_real(&[1.5, 0.5]).unwrap();
        let u_a = unitary_dilation(&a, 2.0).unwrap();
        let enc = shift_encoding(&u_a, 2.0, 2).unwrap();
        let encoded = enc.encoded_matrix();
        assert_abs_diff_eq!(encoded.get(0, 0).re, 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(encoded.get(1, 1).re, -0.5, epsilon = 1e-10);
        assert!(encoded.get(0, 1).norm() < 1e-10);
        assert_eq!(enc.ancilla_qubits(), 2);
        assert_eq!(enc.subnormalization(), 3.0);
    }

    #[test]
    fn shift_encoding_corner_identity_on_corpus() {
        for &(rho, seed) in &[(0.1, 70u64), (0.5, 71), (0.8, 72)] {
            let a = corpus::hermitian_with_target_rho(4, rho, seed).unwrap();
            let alpha = 1.0 + rho;
            let u_a = unitary_dilation(&a, alpha).unwrap();
            let enc = shift_encoding(&u_a, alpha, 4).unwrap();
            let unitarity = enc
                .unitary()
                .adjoint()
                .mul(enc.unitary())
                .sub(&ComplexMatrix::identity(enc.unitary().dim()));
            assert!(unitarity.spectral_norm() <= 1e-11);
            let diff = enc.encoded_matrix().sub(&a.minus_identity());
            assert!(diff.spectral_norm() <= 1e-10);
        }
    }

    #[test]
    fn g_rotation_is_unitary_in_closed_form() {
        // G^H G = I exactly: entries are (sqrt(a), +-1)/sqrt(1+a).
        let alpha = 2.0f64;
        let scale = 1.0 / (1.0 + alpha);
        assert_abs_diff_eq!(scale * (alpha + 1.0), 1.0, epsilon = 1e-15);
        let u_a = unitary_dilation(&ComplexMatrix::identity(2), 1.0).unwrap();
        let enc = shift_encoding(&u_a, alpha, 2).unwrap();
        let u = enc.unitary();
        let residual = u.adjoint().mul(u).sub(&ComplexMatrix::identity(u.dim()));
        assert!(residual.spectral_norm() < 1e-12);
    }

    #[test]
    fn shift_encoding_rejects_non_unitary() {
        let not_unitary = ComplexMatrix::diag_real(&[1.0, 0.5, 1.0, 1.0]).unwrap();
        assert_eq!(
            shift_encoding(&not_unitary, 1.0, 2).unwrap_err(),
            Error::NotUnitary
        );
    }
}
