//! The block-diagonal linear system behind the quadrature sum.
//!
//! Stacking the `M` resolvent systems `[tau_j (A - I) + I] x^(j) = b`
//! into one block-diagonal system `bold(A) bold(x) = bold(b)` lets a
//! single linear-systems solve produce the superposition
//! `|x> = sum_j p_j |j>|x_j>` that the pipeline consumes. The solve
//! here is an exact classical stand-in for that quantum subroutine;
//! its output error is injected explicitly via [`perturb_state`].

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ComplexVector};
use crate::quadrature::QuadratureRule;
use crate::rng;

/// Default rescale constant for feeding `bold(A)/c` to a norm-limited
/// solver; any `c >= 2 > ||bold(A)||` works and leaves `|x>` unchanged.
pub const DEFAULT_RESCALE: f64 = 2.0;

/// The assembled system with its per-block solutions.
#[derive(Debug, Clone)]
pub struct QlspInstance {
    a: ComplexMatrix,
    rule: QuadratureRule,
    rho: f64,
    b_unit: ComplexVector,
    big_a: ComplexMatrix,
    big_b: ComplexVector,
    blocks_x: Vec<ComplexVector>,
    p: Vec<f64>,
    x_norm: f64,
    c: f64,
}

/// Computed norms of `bold(A)` next to their closed-form bounds.
#[derive(Debug, Clone, Copy)]
pub struct ConditionBounds {
    pub norm_big_a: f64,
    pub norm_big_a_inv: f64,
    pub kappa: f64,
    /// `2 / (1 - ||A - I||)`.
    pub kappa_bound: f64,
}

impl QlspInstance {
    /// Build the block system for `A`, the rule, and right side `b`.
    ///
    /// `b` is normalized before stacking (the quantum algorithm only
    /// sees `|b>`). Requires `||A - I|| < 1` and nonzero `b`.
    pub fn build(a: &ComplexMatrix, rule: &QuadratureRule, b: &ComplexVector) -> Result<Self> {
        let rho = a.minus_identity().spectral_norm();
        if rho >= 1.0 {
            return Err(Error::NotInUnitBall { rho });
        }
        if b.dim() != a.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: b.dim(),
            });
        }
        let b_unit = b.normalized()?;
        let n = a.dim();
        let m = rule.order();
        let shift = a.minus_identity();
        let mut big_a = ComplexMatrix::zeros(n * m)?;
        let mut blocks_x = Vec::with_capacity(m);
        for (j, &tau) in rule.taus().iter().enumerate() {
            let block = shift
                .scaled(Complex64::new(tau, 0.0))
                .add(&ComplexMatrix::identity(n));
            for r in 0..n {
                for cidx in 0..n {
                    big_a.set(j * n + r, j * n + cidx, block.get(r, cidx));
                }
            }
            blocks_x.push(block.solve(&b_unit)?);
        }
        let big_b = ComplexVector::stack(&alloc::vec![b_unit.clone(); m])?;
        let x_norm = blocks_x
            .iter()
            .map(|x| x.norm().powi(2))
            .sum::<f64>()
            .sqrt();
        let p: Vec<f64> = blocks_x.iter().map(|x| x.norm() / x_norm).collect();
        Ok(Self {
            a: a.clone(),
            rule: rule.clone(),
            rho,
            b_unit,
            big_a,
            big_b,
            blocks_x,
            p,
            x_norm,
            c: DEFAULT_RESCALE,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// The normalized right side `|b>`.
    pub fn b_unit(&self) -> &ComplexVector {
        &self.b_unit
    }

    /// The `NM x NM` block-diagonal matrix.
    pub fn big_a(&self) -> &ComplexMatrix {
        &self.big_a
    }

    /// The stacked right side; `||bold(b)|| = sqrt(M)`.
    pub fn big_b(&self) -> &ComplexVector {
        &self.big_b
    }

    /// Per-block solutions `x^(j)` of the unnormalized systems.
    pub fn blocks_x(&self) -> &[ComplexVector] {
        &self.blocks_x
    }

    /// Block weights `p_j = ||x^(j)|| / ||bold(x)||`.
    pub fn block_weights(&self) -> &[f64] {
        &self.p
    }

    /// `||bold(x)||`.
    pub fn x_norm(&self) -> f64 {
        self.x_norm
    }

    /// Rescale constant `c >= 2`.
    pub fn rescale_constant(&self) -> f64 {
        self.c
    }

    /// The unit-norm solution state `|x> = sum_j p_j |j>|x_j>`.
    pub fn ideal_solution_state(&self) -> ComplexVector {
        let scale = Complex64::new(1.0 / self.x_norm, 0.0);
        let scaled: Vec<ComplexVector> =
            self.blocks_x.iter().map(|x| x.scaled(scale)).collect();
        ComplexVector::stack(&scaled).expect("m >= 1")
    }

    /// Spectral norms and condition number of `bold(A)` computed from
    /// the materialized matrix, next to the closed-form bound.
    pub fn condition_bounds(&self) -> Result<ConditionBounds> {
        let norm_big_a = self.big_a.spectral_norm();
        let norm_big_a_inv = self.big_a.inverse()?.spectral_norm();
        Ok(ConditionBounds {
            norm_big_a,
            norm_big_a_inv,
            kappa: norm_big_a * norm_big_a_inv,
            kappa_bound: 2.0 / (1.0 - self.rho),
        })
    }
}

/// `(A - I) sum_j omega_j y^(j)` for a stacked `NM` vector `y`.
///
/// Applied to the unit solution state this is the vector `bold(f)_M`;
/// applied to a perturbed state it is `bold(f)~`.
pub fn weighted_block_image(
    a: &ComplexMatrix,
    rule: &QuadratureRule,
    stacked: &ComplexVector,
) -> Result<ComplexVector> {
    let n = a.dim();
    let m = rule.order();
    if stacked.dim() != n * m {
        return Err(Error::DimensionMismatch {
            expected: n * m,
            got: stacked.dim(),
        });
    }
    let mut combined = ComplexVector::zeros(n)?;
    for (j, &omega) in rule.weights().iter().enumerate() {
        for i in 0..n {
            let v = combined.get(i) + stacked.get(j * n + i) * omega;
            combined.set(i, v);
        }
    }
    Ok(a.minus_identity().mul_vec(&combined))
}

/// Unit vector at exact chord distance `eps_prime` from `x_state`.
///
/// Constructed as `cos(theta) x + sin(theta) u` with `u` a seeded
/// pseudo-random unit vector orthogonal to `x` and `2 sin(theta/2) =
/// eps_prime`, so the distance is exact up to rounding.
pub fn perturb_state(
    x_state: &ComplexVector,
    eps_prime: f64,
    seed: u64,
) -> Result<ComplexVector> {
    if !(0.0..0.5).contains(&eps_prime) {
        return Err(Error::EpsilonOutOfRange { value: eps_prime });
    }
    let x = x_state.normalized()?;
    if eps_prime == 0.0 {
        return Ok(x);
    }
    if x.dim() < 2 {
        return Err(Error::DomainError {
            what: "perturbation direction needs dimension >= 2",
        });
    }
    let mut r = rng::seeded(seed);
    let mut u = rng::complex_gaussian_vector(x.dim(), &mut r);
    for _ in 0..2 {
        let overlap = x.dot(&u);
        u.axpy(-overlap, &x);
    }
    let u = u.normalized()?;
    let theta = 2.0 * (eps_prime / 2.0).asin();
    let mut out = x.scaled(Complex64::new(theta.cos(), 0.0));
    out.axpy(Complex64::new(theta.sin(), 0.0), &u);
    Ok(out)
}

/// Hermitian dilation `[[0, A], [A^H, 0]]` with right side `(b, 0)`.
///
/// Turns any square system into a Hermitian one twice the size; the
/// original solution appears in the lower block.
pub fn hermitian_dilation(
    a: &ComplexMatrix,
    b: &ComplexVector,
) -> Result<(ComplexMatrix, ComplexVector)> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.dim(),
        });
    }
    let dilated = ComplexMatrix::from_fn(2 * n, |i, j| {
        if i < n && j >= n {
            a.get(i, j - n)
        } else if i >= n && j < n {
            a.get(j, i - n).conj()
        } else {
            Complex64::new(0.0, 0.0)
        }
    })?;
    let mut rhs = ComplexVector::zeros(2 * n)?;
    for i in 0..n {
        rhs.set(i, b.get(i));
    }
    Ok((dilated, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::logapprox::LogApprox;
    use approx::assert_abs_diff_eq;

    fn diag_example() -> (ComplexMatrix, QuadratureRule, ComplexVector) {
        let a = ComplexMatrix::diag_real(&[1.5, 0.5]).unwrap();
        let rule = QuadratureRule::gauss_legendre(1).unwrap();
        let b = ComplexVector::basis(2, 0).unwrap();
        (a, rule, b)
    }

    #[test]
    fn diagonal_block_and_solution() {
        let (a, rule, b) = diag_example();
        let inst = QlspInstance::build(&a, &rule, &b).unwrap();
        assert_abs_diff_eq!(inst.big_a().get(0, 0).re, 1.25, epsilon = 1e-14);
        assert_abs_diff_eq!(inst.big_a().get(1, 1).re, 0.75, epsilon = 1e-14);
        assert_abs_diff_eq!(inst.blocks_x()[0].get(0).re, 0.8, epsilon = 1e-14);
        assert_abs_diff_eq!(inst.blocks_x()[0].get(1).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn two_point_blocks_use_rule_nodes() {
        let a = corpus::hermitian_with_target_rho(4, 0.5, 11).unwrap();
        let rule = QuadratureRule::gauss_legendre(2).unwrap();
        let b = corpus::uniform_state(4).unwrap();
        let inst = QlspInstance::build(&a, &rule, &b).unwrap();
        assert_eq!(inst.big_a().dim(), 8);
        let shift = a.minus_identity();
        for (j, &tau) in rule.taus().iter().enumerate() {
            for r in 0..4 {
                for c in 0..4 {
                    let expected = shift.get(r, c) * tau
                        + if r == c {
                            Complex64::new(1.0, 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                    let got = inst.big_a().get(4 * j + r, 4 * j + c);
                    assert!((got - expected).norm() < 1e-14);
                }
            }
        }
        // Off-diagonal blocks are zero.
        assert_eq!(inst.big_a().get(0, 4), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn weighted_solutions_recover_h_m_b() {
        let a = corpus::hermitian_with_target_rho(4, 0.3, 12).unwrap();
        let rule = QuadratureRule::gauss_legendre(4).unwrap();
        let b = corpus::uniform_state(4).unwrap();
        let inst = QlspInstance::build(&a, &rule, &b).unwrap();
        let mut acc = ComplexVector::zeros(4).unwrap();
        for (x, &w) in inst.blocks_x().iter().zip(rule.weights()) {
            acc.axpy(Complex64::new(w, 0.0), x);
        }
        let expected = LogApprox::build(&a, &rule)
            .unwrap()
            .h_m()
            .mul_vec(inst.b_unit());
        assert!(acc.sub(&expected).norm() < 1e-10);
    }

    #[test]
    fn stacked_norms_and_weights() {
        let a = corpus::hermitian_with_target_rho(8, 0.5, 13).unwrap();
        let rule = QuadratureRule::gauss_legendre(4).unwrap();
        let b = corpus::uniform_state(8).unwrap();
        let inst = QlspInstance::build(&a, &rule, &b).unwrap();
        assert_abs_diff_eq!(inst.big_b().norm(), 2.0, epsilon = 1e-12);
        let p_sq: f64 = inst.block_weights().iter().map(|p| p * p).sum();
        assert_abs_diff_eq!(p_sq, 1.0, epsilon = 1e-12);
        assert!(inst.rescale_constant() >= 2.0);
    }

    #[test]
    fn solution_state_solves_system() {
        let a = corpus::hermitian_with_target_rho(4, 0.5, 14).unwrap();
        let rule = QuadratureRule::gauss_legendre(2).unwrap();
        let b = corpus::uniform_state(4).unwrap();
        let inst = QlspInstance::build(&a, &rule, &b).unwrap();
        let state = inst.ideal_solution_state();
        assert_abs_diff_eq!(state.norm(), 1.0, epsilon = 1e-12);
        // Group norms reproduce p_j.
        for (j, &p) in inst.block_weights().iter().enumerate() {
            let group: f64 = (0..4).map(|i| state.get(4 * j + i).norm_sqr()).sum();
            assert_abs_diff_eq!(group.sqrt(), p, epsilon = 1e-12);
        }
        let residual = inst
            .big_a()
            .mul_vec(&state.scaled(Complex64::new(inst.x_norm(), 0.0)))
            .sub(inst.big_b());
        assert!(residual.norm() < 1e-9);
    }

    #[test]
    fn single_block_state_is_normalized_solution() {
        let (a, rule, b) = diag_example();
        let inst = QlspInstance::build(&a, &rule, &b).unwrap();
        let state = inst.ideal_solution_state();
        let expected = inst.blocks_x()[0].normalized().unwrap();
        assert!(state.sub(&expected).norm() < 1e-14);
    }

    #[test]
    fn rescaled_system_keeps_solution_state() {
        let a = corpus::hermitian_with_target_rho(4, 0.5, 15).unwrap();
        let rule = QuadratureRule::gauss_legendre(2).unwrap();
        let b = corpus::uniform_state(4).unwrap();
        let inst = QlspInstance::build(&a, &rule, &b).unwrap();
        let c = inst.rescale_constant();
        let scaled = inst.big_a().scaled(Complex64::new(1.0 / c, 0.0));
        let x_scaled = scaled.solve(inst.big_b()).unwrap();
        let state = inst.ideal_solution_state();
        assert!(x_scaled.normalized().unwrap().sub(&state).norm() < 1e-10);
    }

    #[test]
    fn perturbation_identity_at_zero() {
        let x = corpus::uniform_state(6).unwrap();
        let y = perturb_state(&x, 0.0, 9).unwrap();
        assert!(x.sub(&y).norm() < 1e-15);
    }

    #[test]
    fn perturbation_distance_is_exact() {
        let x = corpus::uniform_state(6).unwrap();
        for seed in 0..20u64 {
            let y = perturb_state(&x, 0.1, seed).unwrap();
            assert_abs_diff_eq!(x.sub(&y).norm(), 0.1, epsilon = 1e-12);
            assert_abs_diff_eq!(y.norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn perturbation_seeds_differ_but_repeat() {
        let x = corpus::uniform_state(6).unwrap();
        let y1 = perturb_state(&x, 0.2, 1).unwrap();
        let y1_again = perturb_state(&x, 0.2, 1).unwrap();
        let y2 = perturb_state(&x, 0.2, 2).unwrap();
        assert_eq!(y1, y1_again);
        assert!(y1.sub(&y2).norm() > 1e-3);
        assert_abs_diff_eq!(x.sub(&y2).norm(), 0.2, epsilon = 1e-12);
    }

    #[test]
    fn perturbation_epsilon_range() {
        let x = corpus::uniform_state(4).unwrap();
        assert!(matches!(
            perturb_state(&x, 0.5, 0).unwrap_err(),
            Error::EpsilonOutOfRange { .. }
        ));
        assert!(matches!(
            perturb_state(&x, -0.1, 0).unwrap_err(),
            Error::EpsilonOutOfRange { .. }
        ));
    }

    #[test]
    fn condition_bounds_diagonal_example() {
        let (a, rule, b) = diag_example();
        let inst = QlspInstance::build(&a, &rule, &b).unwrap();
        let cb = inst.condition_bounds().unwrap();
        assert_abs_diff_eq!(cb.norm_big_a, 1.25, epsilon = 1e-12);
        assert_abs_diff_eq!(cb.norm_big_a_inv, 4.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cb.kappa, 5.0 / 3.0, epsilon = 1e-11);
        assert_abs_diff_eq!(cb.kappa_bound, 4.0, epsilon = 1e-14);
        assert!(cb.kappa < cb.kappa_bound);
    }

    #[test]
    fn condition_bounds_identity() {
        let rule = QuadratureRule::gauss_legendre(2).unwrap();
        let b = corpus::uniform_state(2).unwrap();
        let inst = QlspInstance::build(&ComplexMatrix::identity(2), &rule, &b).unwrap();
        let cb = inst.condition_bounds().unwrap();
        assert_abs_diff_eq!(cb.kappa, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cb.kappa_bound, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn condition_lemmas_hold_on_corpus() {
        for &(rho, m, seed) in &[(0.1, 1usize, 20u64), (0.3, 2, 21), (0.5, 4, 22), (0.8, 8, 23)] {
            let a = corpus::hermitian_with_target_rho(4, rho, seed).unwrap();
            let rule = QuadratureRule::gauss_legendre(m).unwrap();
            let b = corpus::uniform_state(4).unwrap();
            let inst = QlspInstance::build(&a, &rule, &b).unwrap();
            let cb = inst.condition_bounds().unwrap();
            assert!(cb.norm_big_a < 2.0);
            assert!(cb.norm_big_a_inv < 1.0 / (1.0 - rho) + 1e-12);
            assert!(cb.kappa < cb.kappa_bound);
        }
    }

    #[test]
    fn lemma7_stacked_error_bound() {
        let a = corpus::hermitian_with_target_rho(4, 0.5, 30).unwrap();
        let rule = QuadratureRule::gauss_legendre(2).unwrap();
        let b = corpus::uniform_state(4).unwrap();
        let inst = QlspInstance::build(&a, &rule, &b).unwrap();
        let approx = LogApprox::build(&a, &rule).unwrap();
        let log_a = a.principal_log().unwrap();
        let scale = Complex64::new(1.0 / inst.x_norm(), 0.0);
        let f_vec = log_a.mul_vec(inst.b_unit()).scaled(scale);
        let f_m_vec = approx.f_m().mul_vec(inst.b_unit()).scaled(scale);
        let lhs = f_vec.sub(&f_m_vec).norm();
        let rhs = approx.f_m().sub(&log_a).spectral_norm() / inst.x_norm();
        assert!(lhs <= rhs + 1e-12);
    }

    #[test]
    fn lemma8_perturbed_image_bound() {
        let a = corpus::hermitian_with_target_rho(4, 0.5, 31).unwrap();
        let rule = QuadratureRule::gauss_legendre(4).unwrap();
        let b = corpus::uniform_state(4).unwrap();
        let inst = QlspInstance::build(&a, &rule, &b).unwrap();
        let approx = LogApprox::build(&a, &rule).unwrap();
        let state = inst.ideal_solution_state();
        let f_m_vec = weighted_block_image(&a, &rule, &state).unwrap();
        let eps_prime = 0.2;
        for seed in 0..100u64 {
            let perturbed = perturb_state(&state, eps_prime, seed).unwrap();
            let f_tilde = weighted_block_image(&a, &rule, &perturbed).unwrap();
            let lhs = f_m_vec.sub(&f_tilde).norm();
            assert!(lhs <= approx.delta_m() * eps_prime + 1e-12, "seed {seed}: {lhs}");
        }
    }

    #[test]
    fn dilation_of_identity() {
        let b = ComplexVector::basis(2, 0).unwrap();
        let (d, rhs) = hermitian_dilation(&ComplexMatrix::identity(2), &b).unwrap();
        assert!(d.is_hermitian());
        assert_abs_diff_eq!(d.spectral_norm(), 1.0, epsilon = 1e-12);
        assert_eq!(rhs.get(0).re, 1.0);
        assert_eq!(rhs.get(2).norm(), 0.0);
    }

    #[test]
    fn dilation_eigenvalues_are_signed_singular_values() {
        let mut r = rng::seeded(404);
        let a = ComplexMatrix::from_fn(3, |_, _| {
            Complex64::new(rng::standard_normal(&mut r), rng::standard_normal(&mut r))
        })
        .unwrap();
        let b = ComplexVector::basis(3, 0).unwrap();
        let (d, _) = hermitian_dilation(&a, &b).unwrap();
        let (eigs, _) = d.eigh().unwrap();
        let sv = crate::matrix::testkit::svd_values_jacobi(&a);
        for (k, &s) in sv.iter().enumerate() {
            assert_abs_diff_eq!(eigs[eigs.len() - 1 - k], s, epsilon = 1e-10);
            assert_abs_diff_eq!(eigs[k], -sv[k], epsilon = 1e-10);
        }
    }

    #[test]
    fn dilated_solve_recovers_solution_in_lower_block() {
        let a = corpus::hermitian_with_target_rho(3, 0.4, 32).unwrap();
        let b = corpus::uniform_state(3).unwrap();
        let (d, rhs) = hermitian_dilation(&a, &b).unwrap();
        let z = d.solve(&rhs).unwrap();
        let x = a.solve(&b).unwrap();
        for i in 0..3 {
            assert!(z.get(i).norm() < 1e-11);
            assert!((z.get(3 + i) - x.get(i)).norm() < 1e-10);
        }
    }
}
