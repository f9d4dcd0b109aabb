//! Cost estimation for the end-to-end algorithm.
//!
//! Formula values, not absolute gate counts: every big-O constant is
//! fixed to one and all logarithms are base two (qubit counting
//! convention), so the numbers are meaningful for trend comparison
//! across parameter settings.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Cost of one linear-systems solve in the sparse-access model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QlspCost {
    /// Queries to the matrix oracle: `d k^2 log^2(d k / eps)`.
    pub queries_pa: f64,
    /// Uses of the state-preparation oracle: `k log(d k / eps)`.
    pub uses_pb: f64,
    /// Gates: `d k^2 log^2(d k / eps) (log N + log^(5/2)(d k / eps))`.
    pub gates: f64,
}

/// Solver cost for a `d`-sparse system of dimension `n_dim` at
/// condition number `kappa` and target error `eps`.
pub fn qlsp_cost(d: u64, kappa: f64, eps: f64, n_dim: usize) -> Result<QlspCost> {
    if d < 1 {
        return Err(Error::DomainError { what: "sparsity must be >= 1" });
    }
    if !(kappa >= 1.0) {
        return Err(Error::DomainError { what: "condition number must be >= 1" });
    }
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::DomainError { what: "solver error must lie in (0, 1/2]" });
    }
    if n_dim < 1 {
        return Err(Error::DomainError { what: "dimension must be >= 1" });
    }
    let lg = (d as f64 * kappa / eps).log2();
    let queries_pa = d as f64 * kappa * kappa * lg * lg;
    let uses_pb = kappa * lg;
    let gates = queries_pa * ((n_dim as f64).log2() + lg.powf(2.5));
    Ok(QlspCost { queries_pa, uses_pb, gates })
}

/// Inputs of the total-cost estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    /// `||A - I||`.
    pub rho: f64,
    /// Sparsity of `A`.
    pub d: u64,
    /// Solver error injected in the first step.
    pub eps_prime: f64,
    /// Number of quadrature points.
    pub m: usize,
    /// System dimension `N`.
    pub n_dim: usize,
    /// Fixed-point width of the oracle entries.
    pub s_bits: u32,
    /// User-supplied gate count `L` of the block-encoding unitary.
    pub gate_count_u: f64,
    /// Success-probability lower bound driving amplitude amplification.
    pub p_lower_bound: f64,
}

/// The assembled estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostReport {
    /// `kappa' = 1 / (1 - ||A - I||)`.
    pub kappa_prime: f64,
    /// Condition-number bound `2 kappa'` for the block system.
    pub kappa_big_a_bound: f64,
    pub d: u64,
    pub eps_prime: f64,
    pub m: usize,
    pub n_dim: usize,
    pub s_bits: u32,
    /// The `L` of the block-encoding unitary.
    pub gate_count_u: f64,
    pub pa_queries: f64,
    pub pb_uses: f64,
    /// Solve gates with `log N` widened to `log(MN)`, plus `O(1)` for
    /// the controlled rotation, `log M` Hadamards, and `L`.
    pub gates: f64,
    /// `ceil(1 / sqrt(p_lower_bound))`.
    pub aa_repetitions: u64,
}

/// Total cost of Steps 1-4 with the solver run at `kappa'`.
pub fn total_cost(params: &CostParams) -> Result<CostReport> {
    if !(0.0..1.0).contains(&params.rho) {
        return Err(Error::DomainError { what: "rho must lie in [0, 1)" });
    }
    if !(params.p_lower_bound > 0.0) {
        return Err(Error::DomainError { what: "probability bound must be positive" });
    }
    if params.m < 1 {
        return Err(Error::DomainError { what: "quadrature order must be >= 1" });
    }
    let kappa_prime = 1.0 / (1.0 - params.rho);
    let solve = qlsp_cost(
        params.d,
        kappa_prime,
        params.eps_prime,
        params.m * params.n_dim,
    )?;
    let m_gates = (params.m as f64).log2();
    let gates = solve.gates + 1.0 + m_gates + params.gate_count_u;
    let aa_repetitions = (1.0 / params.p_lower_bound.sqrt()).ceil() as u64;
    Ok(CostReport {
        kappa_prime,
        kappa_big_a_bound: 2.0 * kappa_prime,
        d: params.d,
        eps_prime: params.eps_prime,
        m: params.m,
        n_dim: params.n_dim,
        s_bits: params.s_bits,
        gate_count_u: params.gate_count_u,
        pa_queries: solve.queries_pa,
        pb_uses: solve.uses_pb,
        gates,
        aa_repetitions,
    })
}
