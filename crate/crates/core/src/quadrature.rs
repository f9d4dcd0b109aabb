//! Gauss-Legendre quadrature on `[0, 1]`.
//!
//! The raw rule lives on `[-1, 1]`; the affine map `tau = t/2 + 1/2`,
//! `omega = s/2` moves it to the unit interval, where the `M`-point sum
//! `x sum_j omega_j / (tau_j x + 1)` realizes the `(M, M)` Pade
//! approximant of `log(1 + x)`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Largest supported rule order.
pub const MAX_ORDER: usize = 64;

/// An `M`-point Gauss-Legendre rule mapped to `[0, 1]`.
///
/// Nodes are strictly increasing; weights are positive and sum to one.
/// Symmetry `tau_j + tau_{M+1-j} = 1`, `omega_j = omega_{M+1-j}` holds
/// exactly because the mapped arrays are built by mirroring.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    m: usize,
    taus: Vec<f64>,
    weights: Vec<f64>,
    raw_nodes: Vec<f64>,
    raw_weights: Vec<f64>,
}

impl QuadratureRule {
    /// Build the `M`-point rule, `1 <= M <= 64`.
    ///
    /// Nodes come from Newton iteration on the degree-`M` Legendre
    /// polynomial with the Chebyshev-like initial guess
    /// `cos(pi (j - 1/4) / (M + 1/2))`, converged to `1e-15`.
    pub fn gauss_legendre(m: usize) -> Result<Self> {
        if m == 0 || m > MAX_ORDER {
            return Err(Error::UnsupportedOrder { m });
        }
        let mut raw_nodes = vec![0.0f64; m];
        let mut raw_weights = vec![0.0f64; m];
        let half = m / 2;
        for j in 1..=half {
            // j-th root counted from +1 downward.
            let mut x = (core::f64::consts::PI * (j as f64 - 0.25) / (m as f64 + 0.5)).cos();
            let mut converged = false;
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(m, x);
                let step = p / dp;
                x -= step;
                if step.abs() <= 1e-15 {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::ConvergenceFailure {
                    what: "legendre root search",
                });
            }
            let (_, dp) = legendre_with_derivative(m, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            raw_nodes[m - j] = x;
            raw_weights[m - j] = w;
            raw_nodes[j - 1] = -x;
            raw_weights[j - 1] = w;
        }
        if m % 2 == 1 {
            let (_, dp) = legendre_with_derivative(m, 0.0);
            raw_nodes[half] = 0.0;
            raw_weights[half] = 2.0 / (dp * dp);
        }
        let taus: Vec<f64> = raw_nodes.iter().map(|t| 0.5 * t + 0.5).collect();
        let weights: Vec<f64> = raw_weights.iter().map(|s| 0.5 * s).collect();
        Ok(Self {
            m,
            taus,
            weights,
            raw_nodes,
            raw_weights,
        })
    }

    pub fn order(&self) -> usize {
        self.m
    }

    /// Mapped nodes on `(0, 1)`, ascending.
    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    /// Mapped weights, positive, summing to one.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Raw nodes on `(-1, 1)`.
    pub fn raw_nodes(&self) -> &[f64] {
        &self.raw_nodes
    }

    /// Raw weights, summing to two.
    pub fn raw_weights(&self) -> &[f64] {
        &self.raw_weights
    }

    /// `C_M = 1 / max_j omega_j`; lies in `[1, M]`.
    pub fn c_m(&self) -> f64 {
        1.0 / self.weights.iter().cloned().fold(0.0, f64::max)
    }

    /// `sqrt(sum_j omega_j^2)`, the weight factor of `delta_M`.
    pub fn weight_l2(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum::<f64>().sqrt()
    }

    /// Quadrature value `x sum_j omega_j / (tau_j x + 1)`.
    ///
    /// Equals the `(M, M)` Pade approximant of `log(1 + x)`; requires
    /// `|x| < 1`.
    pub fn log1p_quadrature(&self, x: f64) -> Result<f64> {
        if !(x.abs() < 1.0) {
            return Err(Error::DomainError {
                what: "quadrature log requires |x| < 1",
            });
        }
        let sum: f64 = self
            .taus
            .iter()
            .zip(&self.weights)
            .map(|(&tau, &w)| w / (tau * x + 1.0))
            .sum();
        Ok(x * sum)
    }

    /// Worst-case approximation error of the matrix logarithm:
    /// `eps_{M,A} = |r_M(-rho) - log(1 - rho)|` for `rho = ||A - I||`.
    pub fn pade_error_bound(&self, rho: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::DomainError {
                what: "error bound requires 0 <= rho < 1",
            });
        }
        if rho == 0.0 {
            return Ok(0.0);
        }
        let approx = self.log1p_quadrature(-rho)?;
        Ok((approx - (1.0 - rho).ln()).abs())
    }

    /// Integral of `x^k` over `[0, 1]` by this rule; exact (up to
    /// rounding) for `k <= 2M - 1`.
    pub fn integrate_monomial(&self, k: u32) -> f64 {
        self.taus
            .iter()
            .zip(&self.weights)
            .map(|(&tau, &w)| w * tau.powi(k as i32))
            .sum()
    }
}

/// Legendre polynomial `P_m` and its derivative at `x`, by the
/// three-term recurrence.
fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0f64;
    let mut p = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 1..m {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let dp = if (x * x - 1.0).abs() < 1e-300 {
        // Derivative at the endpoints, not reachable from interior roots.
        let mf = m as f64;
        x.powi(m as i32 - 1) * mf * (mf + 1.0) / 2.0
    } else {
        (m as f64) * (x * p - p_prev) / (x * x - 1.0)
    };
    (p, dp)
}
