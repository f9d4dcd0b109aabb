//! Exact statevector simulation of the preparation pipeline.
//!
//! Registers are ordered most-significant to least-significant as
//! `(j-register, block-encoding ancillas, i-register, rotation ancilla)`,
//! so the flat amplitude index is
//! `((j * 2^(a+1) + anc) * N + i) * 2 + rot`. This ordering is a
//! contract: state dumps from different runs are comparable slot by
//! slot.
//!
//! The stages mirror the algorithm: the solution state of the block
//! system enters at stage one; a `j`-controlled rotation writes the
//! quadrature weights into an ancilla; Hadamards on the `j`-register
//! recombine the branches; the block-encoding of `A - I` acts on the
//! `i`-register; post-selecting all-zero ancillas leaves the target
//! state. Measurement is exact projection, not sampling: the theorems
//! under test are statements about exact probabilities.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::encoding::{shift_encoding, unitary_dilation, BlockEncoding};
use crate::error::{Error, Result};
use crate::logapprox::{LogApprox, ZERO_IMAGE_TOL};
use crate::matrix::{ComplexMatrix, ComplexVector};
use crate::oracle::{self, QueryTally, SparseAccess};
use crate::qlsp::{perturb_state, QlspInstance};
use crate::quadrature::QuadratureRule;

/// Post-selection probabilities below this count as zero.
pub const ZERO_PROBABILITY_TOL: f64 = 1e-14;

/// Qubit bookkeeping for the four registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegisterLayout {
    m_qubits: u32,
    n_qubits: u32,
    ua_ancillas: u32,
}

impl RegisterLayout {
    /// Layout for `M = 2^m` blocks, `N = 2^n` system dimension, and `a`
    /// ancillas of the inner block-encoding `U_A`.
    pub fn new(m_blocks: usize, n_dim: usize, ua_ancillas: u32) -> Result<Self> {
        if !m_blocks.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { value: m_blocks });
        }
        if !n_dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { value: n_dim });
        }
        Ok(Self {
            m_qubits: m_blocks.trailing_zeros(),
            n_qubits: n_dim.trailing_zeros(),
            ua_ancillas,
        })
    }

    pub fn m_qubits(&self) -> u32 {
        self.m_qubits
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    /// Ancillas of `U_A`; the shift encoding adds one more.
    pub fn ua_ancillas(&self) -> u32 {
        self.ua_ancillas
    }

    pub fn blocks(&self) -> usize {
        1 << self.m_qubits
    }

    pub fn system_dim(&self) -> usize {
        1 << self.n_qubits
    }

    fn encoding_dim(&self) -> usize {
        1 << (self.ua_ancillas + 1 + self.n_qubits)
    }

    /// Total qubits `m + n + a + 2`.
    pub fn total_qubits(&self) -> u32 {
        self.m_qubits + self.n_qubits + self.ua_ancillas + 2
    }

    pub fn state_dim(&self) -> usize {
        1 << self.total_qubits()
    }

    /// Flat index of `|j>|anc>|i>|rot>`.
    pub fn index(&self, j: usize, anc: usize, i: usize, rot: usize) -> usize {
        debug_assert!(j < self.blocks());
        debug_assert!(anc < (1 << (self.ua_ancillas + 1)));
        debug_assert!(i < self.system_dim());
        debug_assert!(rot < 2);
        (((j << (self.ua_ancillas + 1)) | anc) << (self.n_qubits + 1)) | (i << 1) | rot
    }
}

/// Pipeline progress marker; operations check it so steps cannot be
/// skipped or repeated. Measurement consumes the state instead of
/// having a stage of its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    AfterStep1,
    AfterStep2,
    AfterStep3,
    AfterStep4,
}

impl Stage {
    fn name(&self) -> &'static str {
        match self {
            Stage::AfterStep1 => "after-step-1",
            Stage::AfterStep2 => "after-step-2",
            Stage::AfterStep3 => "after-step-3",
            Stage::AfterStep4 => "after-step-4",
        }
    }
}

/// Full statevector over the four registers.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineState {
    layout: RegisterLayout,
    amplitudes: Vec<Complex64>,
    stage: Stage,
}

impl PipelineState {
    /// Load the (possibly perturbed) solution state `|x~>` of the block
    /// system into the `(j, i)` registers, ancillas at `|0>`.
    pub fn from_solution_state(layout: RegisterLayout, x_state: &ComplexVector) -> Result<Self> {
        let m = layout.blocks();
        let n = layout.system_dim();
        if x_state.dim() != m * n {
            return Err(Error::DimensionMismatch {
                expected: m * n,
                got: x_state.dim(),
            });
        }
        if (x_state.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::DomainError {
                what: "solution state must be unit norm",
            });
        }
        let mut amplitudes = alloc::vec![Complex64::new(0.0, 0.0); layout.state_dim()];
        for j in 0..m {
            for i in 0..n {
                amplitudes[layout.index(j, 0, i, 0)] = x_state.get(j * n + i);
            }
        }
        Ok(Self {
            layout,
            amplitudes,
            stage: Stage::AfterStep1,
        })
    }

    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn amplitude(&self, j: usize, anc: usize, i: usize, rot: usize) -> Complex64 {
        self.amplitudes[self.layout.index(j, anc, i, rot)]
    }

    /// The `i`-register slice at fixed `(j, anc, rot)`.
    pub fn sector(&self, j: usize, anc: usize, rot: usize) -> ComplexVector {
        let n = self.layout.system_dim();
        ComplexVector::from_vec(
            (0..n)
                .map(|i| self.amplitudes[self.layout.index(j, anc, i, rot)])
                .collect(),
        )
        .expect("n >= 1")
    }

    fn expect_stage(&self, expected: Stage) -> Result<()> {
        if self.stage != expected {
            return Err(Error::WrongStage {
                expected: expected.name(),
                found: self.stage.name(),
            });
        }
        Ok(())
    }

    /// Step 2: rotate the ancilla on each `|j>` branch to
    /// `C_M omega_j |0> + sqrt(1 - (C_M omega_j)^2) |1>`.
    pub fn controlled_rotation(mut self, rule: &QuadratureRule) -> Result<Self> {
        self.expect_stage(Stage::AfterStep1)?;
        if rule.order() != self.layout.blocks() {
            return Err(Error::DimensionMismatch {
                expected: self.layout.blocks(),
                got: rule.order(),
            });
        }
        let c_m = rule.c_m();
        let n = self.layout.system_dim();
        let anc_count = 1 << (self.layout.ua_ancillas + 1);
        for (j, &omega) in rule.weights().iter().enumerate() {
            let c = (c_m * omega).min(1.0);
            let s = (1.0 - c * c).max(0.0).sqrt();
            for anc in 0..anc_count {
                for i in 0..n {
                    let idx0 = self.layout.index(j, anc, i, 0);
                    let idx1 = self.layout.index(j, anc, i, 1);
                    let a0 = self.amplitudes[idx0];
                    let a1 = self.amplitudes[idx1];
                    self.amplitudes[idx0] = a0 * c - a1 * s;
                    self.amplitudes[idx1] = a0 * s + a1 * c;
                }
            }
        }
        self.stage = Stage::AfterStep2;
        Ok(self)
    }

    /// Step 3: Hadamard every qubit of the `j`-register.
    pub fn hadamard_mix(mut self) -> Result<Self> {
        self.expect_stage(Stage::AfterStep2)?;
        let low_bits = self.layout.n_qubits + self.layout.ua_ancillas + 2;
        let inv_sqrt2 = core::f64::consts::FRAC_1_SQRT_2;
        for q in 0..self.layout.m_qubits {
            let mask = 1usize << (low_bits + q);
            for idx in 0..self.amplitudes.len() {
                if idx & mask == 0 {
                    let pair = idx | mask;
                    let x = self.amplitudes[idx];
                    let y = self.amplitudes[pair];
                    self.amplitudes[idx] = (x + y) * inv_sqrt2;
                    self.amplitudes[pair] = (x - y) * inv_sqrt2;
                }
            }
        }
        self.stage = Stage::AfterStep3;
        Ok(self)
    }

    /// Step 4: apply the block-encoding unitary of `A - I` to the
    /// `(ancilla, i)` registers on every branch.
    pub fn apply_encoding(mut self, enc: &BlockEncoding) -> Result<Self> {
        self.expect_stage(Stage::AfterStep3)?;
        let expected_dim = self.layout.encoding_dim();
        if enc.unitary().dim() != expected_dim
            || enc.system_dim() != self.layout.system_dim()
        {
            return Err(Error::DimensionMismatch {
                expected: expected_dim,
                got: enc.unitary().dim(),
            });
        }
        let n = self.layout.system_dim();
        let anc_count = 1 << (self.layout.ua_ancillas + 1);
        let sub_dim = anc_count * n;
        let mut sub = alloc::vec![Complex64::new(0.0, 0.0); sub_dim];
        for j in 0..self.layout.blocks() {
            for rot in 0..2 {
                for anc in 0..anc_count {
                    for i in 0..n {
                        sub[anc * n + i] =
                            self.amplitudes[self.layout.index(j, anc, i, rot)];
                    }
                }
                let sub_vec = ComplexVector::from_vec(sub.clone())?;
                let out = enc.unitary().mul_vec(&sub_vec);
                for anc in 0..anc_count {
                    for i in 0..n {
                        self.amplitudes[self.layout.index(j, anc, i, rot)] =
                            out.get(anc * n + i);
                    }
                }
            }
        }
        self.stage = Stage::AfterStep4;
        Ok(self)
    }

    /// Step 5: project onto all-zeros for the `j`-register and every
    /// ancilla. Returns the exact probability and the renormalized
    /// `i`-register state.
    pub fn postselect(self) -> Result<(f64, ComplexVector)> {
        self.expect_stage(Stage::AfterStep4)?;
        let success = self.sector(0, 0, 0);
        let probability = success.norm().powi(2);
        if probability < ZERO_PROBABILITY_TOL {
            return Err(Error::ZeroProbability);
        }
        Ok((probability, success.normalized()?))
    }
}

/// Closed-form ideal success probability
/// `C_M^2 ||f_M(A)|b>||^2 / ((1+alpha)^2 M ||bold(x)||^2)`.
pub fn ideal_success_probability(
    approx: &LogApprox,
    inst: &QlspInstance,
    alpha: f64,
) -> f64 {
    let c_m = approx.rule().c_m();
    let m = approx.rule().order() as f64;
    let f_m_b = approx.f_m().mul_vec(inst.b_unit()).norm();
    (c_m * f_m_b / ((1.0 + alpha) * inst.x_norm())).powi(2) / m
}

/// Lower bound on the post-selection probability,
/// `(1 - eps/2)^2 (C_M K / ((1+alpha) M))^2`.
pub fn success_probability_lower_bound(
    c_m: f64,
    k: f64,
    alpha: f64,
    m: usize,
    eps: f64,
) -> f64 {
    ((1.0 - eps / 2.0) * c_m * k / ((1.0 + alpha) * m as f64)).powi(2)
}

/// Default subnormalization: `1 + ||A - I||` rounded up to two decimal
/// places, which keeps `||A/alpha|| <= 1` since `||A|| <= 1 + ||A - I||`.
pub fn default_alpha(rho: f64) -> f64 {
    ((1.0 + rho) * 100.0).ceil() / 100.0
}

/// Knobs for a full pipeline execution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    /// Subnormalization override; `None` picks [`default_alpha`].
    pub alpha: Option<f64>,
    /// Injected solver error in `[0, 1/2)`.
    pub eps_prime: f64,
    /// Seed for the perturbation direction.
    pub seed: u64,
    /// Fixed-point width for the oracle tally.
    pub s_bits: u32,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            alpha: None,
            eps_prime: 0.0,
            seed: 0,
            s_bits: 32,
        }
    }
}

/// Everything measured in one pipeline execution.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub m: usize,
    pub n_dim: usize,
    pub rho: f64,
    pub alpha: f64,
    pub eps_prime: f64,
    pub seed: u64,
    pub s_bits: u32,
    pub c_m: f64,
    /// `K = ||log(A)|b>|| (1 - rho)`.
    pub k: f64,
    pub eps_ma: f64,
    pub delta_m: f64,
    /// Measured post-selection probability (exact projection).
    pub success_probability: f64,
    /// Closed-form probability for the unperturbed solution.
    pub predicted_ideal_p: f64,
    /// Probability lower bound at the error-bound epsilon.
    pub lower_bound_p: f64,
    /// `|<f|f~>|^2` against the true log state.
    pub output_fidelity: f64,
    /// `|| |f> - |f~> ||`.
    pub state_error: f64,
    /// End-to-end bound `(2/K)(eps_MA + sqrt(M) delta_M eps')`.
    pub bound_state_error: f64,
    /// `ceil(1 / sqrt(p_lower))` amplification repetitions.
    pub aa_repetitions: u64,
    /// Oracle tally from reconstructing `bold(A)` at `s` bits, plus the
    /// `P_b` use and Hadamards of the right-side preparation.
    pub query_counts: QueryTally,
}

/// Execute Steps 1-5 end to end and measure everything.
///
/// Step 1 is the exact classical solve with the requested error
/// `eps_prime` injected as a seeded perturbation; the rest is the exact
/// statevector pipeline. Deterministic for fixed inputs and seed.
pub fn run_full(
    a: &ComplexMatrix,
    b: &ComplexVector,
    rule: &QuadratureRule,
    config: &PipelineConfig,
) -> Result<RunReport> {
    let inst = QlspInstance::build(a, rule, b)?;
    let approx = LogApprox::build(a, rule)?;
    let rho = approx.rho();
    let alpha = config.alpha.unwrap_or_else(|| default_alpha(rho));

    let log_a = a.principal_log()?;
    let f_vec = log_a.mul_vec(inst.b_unit());
    if f_vec.norm() <= ZERO_IMAGE_TOL {
        return Err(Error::ZeroImage);
    }
    let k = f_vec.norm() * (1.0 - rho);
    let f_state = f_vec.normalized()?;

    let x_state = inst.ideal_solution_state();
    let x_input = if config.eps_prime > 0.0 {
        perturb_state(&x_state, config.eps_prime, config.seed)?
    } else {
        x_state
    };

    let layout = RegisterLayout::new(rule.order(), a.dim(), 1)?;
    let u_a = unitary_dilation(a, alpha)?;
    let enc = shift_encoding(&u_a, alpha, a.dim())?;
    let (probability, out_state) = PipelineState::from_solution_state(layout, &x_input)?
        .controlled_rotation(rule)?
        .hadamard_mix()?
        .apply_encoding(&enc)?
        .postselect()?;

    let state_error = f_state.sub(&out_state).norm();
    let output_fidelity = f_state.dot(&out_state).norm_sqr();
    let bound_state_error = approx.output_error_bound(k, config.eps_prime)?;
    let c_m = rule.c_m();
    let predicted_ideal_p = ideal_success_probability(&approx, &inst, alpha);
    let lower_bound_p =
        success_probability_lower_bound(c_m, k, alpha, rule.order(), bound_state_error);
    let aa_repetitions = (1.0 / lower_bound_p.sqrt()).ceil() as u64;

    let mut access = SparseAccess::from_matrix(a, config.s_bits)?;
    oracle::reconstruct_big_matrix(&mut access, rule)?;
    let prep = oracle::prepare_big_b(b, layout.m_qubits())?;
    let mut query_counts = access.tally();
    query_counts.pb_uses += prep.pb_uses;
    query_counts.gates += prep.gates;

    Ok(RunReport {
        m: rule.order(),
        n_dim: a.dim(),
        rho,
        alpha,
        eps_prime: config.eps_prime,
        seed: config.seed,
        s_bits: config.s_bits,
        c_m,
        k,
        eps_ma: approx.eps_ma(),
        delta_m: approx.delta_m(),
        success_probability: probability,
        predicted_ideal_p,
        lower_bound_p,
        output_fidelity,
        state_error,
        bound_state_error,
        aa_repetitions,
        query_counts,
    })
}
