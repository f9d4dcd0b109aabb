//! Classical engine and exact statevector simulation for preparing the
//! quantum state `|f> = log(A)|b> / ||log(A)|b>||`.
//!
//! The crate approximates the principal matrix logarithm through its
//! integral representation discretized by Gauss-Legendre quadrature,
//! builds the block-diagonal linear system behind that quadrature sum,
//! simulates the five-step preparation pipeline (controlled rotation,
//! Hadamard recombination, block-encoding of `A - I`, post-selection)
//! on an exact statevector, and accounts for oracle queries and gates
//! of the sparse-access model.
//!
//! The crate is `no_std` (with `alloc`); all I/O, file formats and the
//! command-line front end live in the companion `matlog` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod complexity;
pub mod corpus;
pub mod encoding;
pub mod error;
pub mod logapprox;
pub mod matrix;
pub mod oracle;
pub mod pipeline;
pub mod qlsp;
pub mod quadrature;
pub mod rng;

mod eigen;

pub use error::{Error, Result};
pub use logapprox::LogApprox;
pub use matrix::{ComplexMatrix, ComplexVector};
pub use pipeline::{PipelineConfig, RunReport};
pub use qlsp::QlspInstance;
pub use quadrature::QuadratureRule;
