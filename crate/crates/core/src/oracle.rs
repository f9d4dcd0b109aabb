//! Query-counted emulation of the sparse-access oracles.
//!
//! `O_A` returns matrix entries at `s` bits of fixed-point accuracy and
//! `O_nu` returns the row index of the l-th nonzero of a column. The
//! composed oracles for the block system derive the entry
//! `tau_k (A_ij - delta_ij) + delta_ij` through staged registers and
//! are charged queries and gates exactly as the construction dictates:
//! one `O_nu` query per position lookup, two `O_A` queries (compute and
//! uncompute) per diagonal-block entry, and a fixed gate tally per
//! stage. Indices `i`, `j`, `l` are 1-based like the oracle definitions;
//! block indices `k` are 0-based.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ComplexVector};
use crate::quadrature::QuadratureRule;

/// Supported fixed-point widths. The mantissa of `x * 2^s` must stay
/// exact in an f64 for |x| < 2, hence the cap.
pub const MAX_BITS: u32 = 52;

/// A complex value stored as a pair of scaled-integer mantissas at
/// scale `2^-s`, rounded to nearest from the exact value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedComplex {
    re: i64,
    im: i64,
    bits: u32,
}

impl FixedComplex {
    pub fn quantize(z: Complex64, bits: u32) -> Self {
        Self {
            re: quantize_f64(z.re, bits),
            im: quantize_f64(z.im, bits),
            bits,
        }
    }

    pub fn zero(bits: u32) -> Self {
        Self { re: 0, im: 0, bits }
    }

    pub fn value(&self) -> Complex64 {
        let scale = (self.bits as f64).exp2().recip();
        Complex64::new(self.re as f64 * scale, self.im as f64 * scale)
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn mantissas(&self) -> (i64, i64) {
        (self.re, self.im)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Product with a real fixed-point factor, rounded back to `s` bits.
    fn scale_by(&self, factor_mantissa: i64) -> Self {
        Self {
            re: mul_round(self.re, factor_mantissa, self.bits),
            im: mul_round(self.im, factor_mantissa, self.bits),
            bits: self.bits,
        }
    }
}

fn quantize_f64(x: f64, bits: u32) -> i64 {
    (x * (bits as f64).exp2()).round() as i64
}

/// `round(a * b / 2^s)` with ties away from zero, exact in i128.
fn mul_round(a: i64, b: i64, bits: u32) -> i64 {
    let prod = a as i128 * b as i128;
    let half = 1i128 << (bits - 1);
    let q = if prod >= 0 {
        (prod + half) >> bits
    } else {
        -((-prod + half) >> bits)
    };
    q as i64
}

fn ceil_log2(x: usize) -> u64 {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as u64
    }
}

/// Running query and gate counters. Monotone; reset only explicitly.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryTally {
    pub o_a: u64,
    pub o_nu: u64,
    pub gates: u64,
    pub pb_uses: u64,
}

/// Sparse access to a matrix: entry lookups at `s` bits and nonzero
/// positions per column, both query-counted.
#[derive(Debug, Clone)]
pub struct SparseAccess {
    n: usize,
    d: usize,
    bits: u32,
    cols: Vec<Vec<(usize, FixedComplex)>>,
    tally: QueryTally,
}

impl SparseAccess {
    /// Capture the nonzero structure and `s`-bit entries of `a`.
    ///
    /// Rejects matrices with a zero diagonal entry; the block-system
    /// oracle construction assumes every diagonal is present.
    pub fn from_matrix(a: &ComplexMatrix, bits: u32) -> Result<Self> {
        if bits == 0 || bits > MAX_BITS {
            return Err(Error::DomainError {
                what: "fixed-point width must lie in 1..=52",
            });
        }
        let n = a.dim();
        let mut cols: Vec<Vec<(usize, FixedComplex)>> = Vec::with_capacity(n);
        let mut row_counts = alloc::vec![0usize; n];
        for j in 0..n {
            let mut col = Vec::new();
            for i in 0..n {
                let z = a.get(i, j);
                if z.norm_sqr() > 0.0 {
                    col.push((i, FixedComplex::quantize(z, bits)));
                    row_counts[i] += 1;
                }
            }
            if a.get(j, j).norm_sqr() == 0.0 {
                return Err(Error::ZeroDiagonal { index: j + 1 });
            }
            cols.push(col);
        }
        let d = cols
            .iter()
            .map(Vec::len)
            .chain(row_counts.iter().copied())
            .max()
            .unwrap_or(0);
        Ok(Self {
            n,
            d,
            bits,
            cols,
            tally: QueryTally::default(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Maximum nonzero count over rows and columns.
    pub fn sparsity(&self) -> usize {
        self.d
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn tally(&self) -> QueryTally {
        self.tally
    }

    pub fn reset_tally(&mut self) {
        self.tally = QueryTally::default();
    }

    /// Nonzeros stored in column `j` (1-based); not an oracle query.
    pub fn column_nonzeros(&self, j: usize) -> Result<usize> {
        if j == 0 || j > self.n {
            return Err(Error::IndexOutOfRange);
        }
        Ok(self.cols[j - 1].len())
    }

    /// `O_A`: the `s`-bit entry at (i, j), 1-based. Zero entries are
    /// returned as exact zero; the query is charged either way.
    pub fn query_entry(&mut self, i: usize, j: usize) -> Result<FixedComplex> {
        if i == 0 || i > self.n || j == 0 || j > self.n {
            return Err(Error::IndexOutOfRange);
        }
        self.tally.o_a += 1;
        let col = &self.cols[j - 1];
        Ok(col
            .iter()
            .find(|(row, _)| *row == i - 1)
            .map(|(_, v)| *v)
            .unwrap_or(FixedComplex::zero(self.bits)))
    }

    /// `O_nu`: the row index (1-based) of the l-th nonzero of column `j`.
    pub fn query_position(&mut self, j: usize, l: usize) -> Result<usize> {
        if j == 0 || j > self.n || l == 0 || l > self.d {
            return Err(Error::IndexOutOfRange);
        }
        self.tally.o_nu += 1;
        let col = &self.cols[j - 1];
        if l > col.len() {
            return Err(Error::NoSuchNonzero { column: j, slot: l });
        }
        Ok(col[l - 1].0 + 1)
    }
}

/// Composed position oracle for the block system: maps `(k, j, l)` to
/// `(k, nu(j, l))` with one `O_nu` query and `log M` copy gates.
pub fn big_position_oracle(
    acc: &mut SparseAccess,
    m_blocks: usize,
    k: usize,
    j: usize,
    l: usize,
) -> Result<(usize, usize)> {
    if k >= m_blocks {
        return Err(Error::IndexOutOfRange);
    }
    let row = acc.query_position(j, l)?;
    acc.tally.gates += ceil_log2(m_blocks);
    Ok((k, row))
}

/// Composed entry oracle for the block system.
///
/// Returns zero for off-diagonal blocks (`k != k2`), charging only the
/// block-equality check and its uncompute. For `k == k2` the value
/// `tau_k A_ij + (1 - tau_k) delta_ij` is assembled in fixed point with
/// exactly two `O_A` queries (compute + uncompute) and the per-stage
/// gates: `log M` (equality check), `s^2` (multiplier), `log N`
/// (diagonal check), `s` + `s` (adders), everything doubled for the
/// uncompute pass.
pub fn big_entry_oracle(
    acc: &mut SparseAccess,
    rule: &QuadratureRule,
    k: usize,
    i: usize,
    k2: usize,
    j: usize,
) -> Result<FixedComplex> {
    let m = rule.order();
    if k >= m || k2 >= m {
        return Err(Error::IndexOutOfRange);
    }
    if i == 0 || i > acc.n || j == 0 || j > acc.n {
        return Err(Error::IndexOutOfRange);
    }
    let s = acc.bits as u64;
    acc.tally.gates += 2 * ceil_log2(m);
    if k != k2 {
        return Ok(FixedComplex::zero(acc.bits));
    }
    let entry = acc.query_entry(i, j)?;
    acc.tally.o_a += 1; // uncompute mirrors the O_A query
    acc.tally.gates += 2 * (s * s + ceil_log2(acc.n) + s + s);
    let tau_mantissa = quantize_f64(rule.taus()[k], acc.bits);
    let mut out = entry.scale_by(tau_mantissa);
    if i == j {
        // 1 - tau_k is exactly representable at the same scale.
        out.re += (1i64 << acc.bits) - tau_mantissa;
    }
    Ok(out)
}

/// State preparation for the stacked right side: `H^(x)m (x) P_b`.
#[derive(Debug, Clone)]
pub struct BigBPrep {
    /// `|bold(b)> = uniform j-register (x) |b>`, dimension `2^m * N`.
    pub state: ComplexVector,
    pub pb_uses: u64,
    pub gates: u64,
}

/// Prepare `|bold(b)>` from a `P_b` stand-in producing `|b>`, charging
/// one `P_b` use and `m` Hadamard gates.
pub fn prepare_big_b(b: &ComplexVector, m_qubits: u32) -> Result<BigBPrep> {
    let b_unit = b.normalized()?;
    let m = 1usize << m_qubits;
    let scale = Complex64::new(1.0 / (m as f64).sqrt(), 0.0);
    let blocks = alloc::vec![b_unit.scaled(scale); m];
    Ok(BigBPrep {
        state: ComplexVector::stack(&blocks)?,
        pb_uses: 1,
        gates: m_qubits as u64,
    })
}

/// Assemble the full `NM x NM` block matrix entry-by-entry through the
/// composed oracle; the tally afterwards reflects `(NM)^2` entry calls.
pub fn reconstruct_big_matrix(
    acc: &mut SparseAccess,
    rule: &QuadratureRule,
) -> Result<ComplexMatrix> {
    let n = acc.dim();
    let m = rule.order();
    let mut out = ComplexMatrix::zeros(n * m)?;
    for k in 0..m {
        for i in 1..=n {
            for k2 in 0..m {
                for j in 1..=n {
                    let v = big_entry_oracle(acc, rule, k, i, k2, j)?;
                    out.set(k * n + i - 1, k2 * n + j - 1, v.value());
                }
            }
        }
    }
    Ok(out)
}
