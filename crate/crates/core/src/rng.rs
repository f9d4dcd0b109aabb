//! Seeded randomness helpers.
//!
//! Everything downstream (corpus generation, perturbation directions,
//! sweep workers) derives from explicit `u64` seeds, so any single row
//! of any report can be reproduced in isolation.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::matrix::{ComplexMatrix, ComplexVector};

/// Deterministic stream cipher RNG for the given seed.
pub fn seeded(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Counter-based seed derivation (splitmix64), so one master seed can
/// fan out into independent per-task streams.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform sample in `[0, 1)` with 53 random mantissa bits.
pub fn uniform_f64(rng: &mut ChaCha12Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal sample (Box-Muller).
pub fn standard_normal(rng: &mut ChaCha12Rng) -> f64 {
    let u1 = loop {
        let u = uniform_f64(rng);
        if u > 0.0 {
            break u;
        }
    };
    let u2 = uniform_f64(rng);
    (-2.0 * u1.ln()).sqrt() * (core::f64::consts::TAU * u2).cos()
}

/// Complex vector with i.i.d. standard complex Gaussian entries.
pub fn complex_gaussian_vector(dim: usize, rng: &mut ChaCha12Rng) -> ComplexVector {
    let entries: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(standard_normal(rng), standard_normal(rng)))
        .collect();
    ComplexVector::from_vec(entries).expect("dim >= 1")
}

/// Haar-random unitary of the given dimension.
///
/// Gram-Schmidt on a complex Gaussian matrix; the positive-real R diagonal
/// implicit in MGS makes the distribution exactly Haar.
pub fn haar_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = seeded(seed);
    let mut cols: Vec<ComplexVector> = (0..dim)
        .map(|_| complex_gaussian_vector(dim, &mut rng))
        .collect();
    for k in 0..dim {
        // Two MGS passes keep orthogonality near machine precision.
        for _ in 0..2 {
            for j in 0..k {
                let proj = cols[j].dot(&cols[k]);
                let (head, tail) = cols.split_at_mut(k);
                tail[0].axpy(-proj, &head[j]);
            }
        }
        let norm = cols[k].norm();
        cols[k].scale(Complex64::new(1.0 / norm, 0.0));
    }
    ComplexMatrix::from_columns(&cols).expect("square by construction")
}
