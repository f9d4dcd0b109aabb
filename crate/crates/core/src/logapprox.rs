//! Quadrature approximation of the matrix logarithm.
//!
//! For `||A - I|| < 1` the principal logarithm has the integral form
//! `log(A) = (A - I) int_0^1 [t(A - I) + I]^{-1} dt`. Discretizing with
//! the mapped Gauss-Legendre rule gives
//! `f_M(A) = (A - I) sum_j omega_j [tau_j (A - I) + I]^{-1}`,
//! whose distance from `log(A)` is bounded by the scalar Pade error
//! `eps_{M,A}` evaluated at `rho = ||A - I||`.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ComplexVector};
use crate::quadrature::QuadratureRule;

/// `log(A)|b>` norms below this are treated as a vanishing target state.
pub const ZERO_IMAGE_TOL: f64 = 1e-12;

/// Resolvent `h(t) = [t(A - I) + I]^{-1}` for `t` in `[0, 1]`.
///
/// Nonsingular whenever `||A - I|| < 1`; an inversion failure therefore
/// signals a broken caller contract and surfaces as `NearSingularShift`.
pub fn resolvent(a: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::DomainError {
            what: "resolvent parameter t must lie in [0, 1]",
        });
    }
    let shifted = a
        .minus_identity()
        .scaled(Complex64::new(t, 0.0))
        .add(&ComplexMatrix::identity(a.dim()));
    shifted.inverse().map_err(|_| Error::NearSingularShift)
}

/// The assembled approximation `f_M(A)` with its error constants.
#[derive(Debug, Clone)]
pub struct LogApprox {
    a: ComplexMatrix,
    rule: QuadratureRule,
    rho: f64,
    f_m: ComplexMatrix,
    h_m: ComplexMatrix,
    eps_ma: f64,
    delta_m: f64,
}

impl LogApprox {
    /// Build `h_M(A)`, `f_M(A)` and the constants `eps_{M,A}`, `delta_M`.
    ///
    /// Fails with `NotInUnitBall` when `||A - I|| >= 1`.
    pub fn build(a: &ComplexMatrix, rule: &QuadratureRule) -> Result<Self> {
        let rho = a.minus_identity().spectral_norm();
        if rho >= 1.0 {
            return Err(Error::NotInUnitBall { rho });
        }
        let n = a.dim();
        let mut h_m = ComplexMatrix::zeros(n)?;
        for (&tau, &omega) in rule.taus().iter().zip(rule.weights()) {
            let r = resolvent(a, tau)?;
            h_m = h_m.add(&r.scaled(Complex64::new(omega, 0.0)));
        }
        let f_m = a.minus_identity().mul(&h_m);
        let eps_ma = rule.pade_error_bound(rho)?;
        let delta_m = rho * rule.weight_l2();
        Ok(Self {
            a: a.clone(),
            rule: rule.clone(),
            rho,
            f_m,
            h_m,
            eps_ma,
            delta_m,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    /// `||A - I||`.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `f_M(A) = (A - I) h_M(A)`.
    pub fn f_m(&self) -> &ComplexMatrix {
        &self.f_m
    }

    /// `h_M(A) = sum_j omega_j [tau_j (A - I) + I]^{-1}`.
    pub fn h_m(&self) -> &ComplexMatrix {
        &self.h_m
    }

    /// Approximation error bound `||f_M(A) - log(A)|| <= eps_{M,A}`.
    pub fn eps_ma(&self) -> f64 {
        self.eps_ma
    }

    /// `delta_M = ||A - I|| sqrt(sum_j omega_j^2)`.
    pub fn delta_m(&self) -> f64 {
        self.delta_m
    }

    /// End-to-end output-state error bound
    /// `(2/K)(eps_{M,A} + sqrt(M) delta_M eps')`.
    pub fn output_error_bound(&self, k: f64, eps_prime: f64) -> Result<f64> {
        if !(0.0..0.5).contains(&eps_prime) {
            return Err(Error::EpsilonOutOfRange { value: eps_prime });
        }
        let m = self.rule.order() as f64;
        Ok(2.0 / k * (self.eps_ma + m.sqrt() * self.delta_m * eps_prime))
    }
}

/// The constant `K = ||log(A)|b>|| (1 - ||A - I||)` of the error bound.
///
/// `b_state` is normalized internally (the algorithm only ever sees the
/// state `|b>`); a vanishing image `log(A)|b>` is rejected as `ZeroImage`.
pub fn error_constant(a: &ComplexMatrix, b_state: &ComplexVector) -> Result<f64> {
    let rho = a.minus_identity().spectral_norm();
    if rho >= 1.0 {
        return Err(Error::NotInUnitBall { rho });
    }
    let b_unit = b_state.normalized()?;
    let log_a = a.principal_log()?;
    let image_norm = log_a.mul_vec(&b_unit).norm();
    if image_norm <= ZERO_IMAGE_TOL {
        return Err(Error::ZeroImage);
    }
    Ok(image_norm * (1.0 - rho))
}
