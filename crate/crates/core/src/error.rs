//! Crate-wide error type.

use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong across the engine.
///
/// Variants mirror the contracts of the individual operations; callers
/// that violate a documented precondition get a specific variant rather
/// than a panic or a silently wrong answer.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Dimensions of two operands do not line up.
    DimensionMismatch { expected: usize, got: usize },
    /// Matrix is numerically singular (pivot below threshold).
    SingularMatrix,
    /// Operation requires a Hermitian matrix.
    NotHermitian,
    /// An eigenvalue lies on the closed negative real axis, where the
    /// principal logarithm is undefined.
    EigOnNegativeRealAxis,
    /// Eigenvector basis too ill-conditioned to trust the decomposition.
    IllConditionedEigenbasis { kappa: f64 },
    /// An iterative kernel failed to converge within its budget.
    ConvergenceFailure { what: &'static str },
    /// Quadrature order outside the supported range.
    UnsupportedOrder { m: usize },
    /// Scalar argument outside the domain of the requested function.
    DomainError { what: &'static str },
    /// `||A - I|| >= 1`; the integral representation does not apply.
    NotInUnitBall { rho: f64 },
    /// Shifted matrix `t(A - I) + I` failed to invert; signals a broken
    /// caller contract since the shift is nonsingular when `||A-I|| < 1`.
    NearSingularShift,
    /// `log(A)|b>` vanishes, so the target state is undefined.
    ZeroImage,
    /// Vector is zero where a nonzero vector is required.
    ZeroVector,
    /// Solver error parameter outside `[0, 1/2)`.
    EpsilonOutOfRange { value: f64 },
    /// Pipeline stage does not match the operation's expected stage.
    WrongStage {
        expected: &'static str,
        found: &'static str,
    },
    /// Matrix expected to be unitary is not.
    NotUnitary,
    /// Block-encoding subnormalization smaller than `||A||`.
    AlphaTooSmall { alpha: f64, norm: f64 },
    /// Post-selection probability numerically zero.
    ZeroProbability,
    /// Oracle index outside `1..=N` (or `1..=d` for nonzero slots).
    IndexOutOfRange,
    /// Column holds fewer nonzeros than the requested slot.
    NoSuchNonzero { column: usize, slot: usize },
    /// Sparse-access construction requires all diagonal entries nonzero.
    ZeroDiagonal { index: usize },
    /// Register sizes must be exact powers of two.
    NotPowerOfTwo { value: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::SingularMatrix => write!(f, "matrix is numerically singular"),
            Error::NotHermitian => write!(f, "matrix is not Hermitian"),
            Error::EigOnNegativeRealAxis => {
                write!(f, "eigenvalue on the closed negative real axis")
            }
            Error::IllConditionedEigenbasis { kappa } => {
                write!(f, "eigenvector basis ill-conditioned (kappa = {kappa:.3e})")
            }
            Error::ConvergenceFailure { what } => write!(f, "{what} failed to converge"),
            Error::UnsupportedOrder { m } => {
                write!(f, "quadrature order {m} outside supported range 1..=64")
            }
            Error::DomainError { what } => write!(f, "domain error: {what}"),
            Error::NotInUnitBall { rho } => {
                write!(f, "||A - I|| = {rho} >= 1; matrix outside the unit ball around I")
            }
            Error::NearSingularShift => write!(f, "shifted matrix near singular"),
            Error::ZeroImage => write!(f, "log(A)|b> vanishes; target state undefined"),
            Error::ZeroVector => write!(f, "vector is zero"),
            Error::EpsilonOutOfRange { value } => {
                write!(f, "epsilon' = {value} outside [0, 1/2)")
            }
            Error::WrongStage { expected, found } => {
                write!(f, "pipeline stage {found}, expected {expected}")
            }
            Error::NotUnitary => write!(f, "matrix is not unitary"),
            Error::AlphaTooSmall { alpha, norm } => {
                write!(f, "alpha = {alpha} smaller than ||A|| = {norm}")
            }
            Error::ZeroProbability => write!(f, "post-selection probability is zero"),
            Error::IndexOutOfRange => write!(f, "oracle index out of range"),
            Error::NoSuchNonzero { column, slot } => {
                write!(f, "column {column} has no nonzero in slot {slot}")
            }
            Error::ZeroDiagonal { index } => {
                write!(f, "diagonal entry {index} is zero; sparse access requires nonzero diagonal")
            }
            Error::NotPowerOfTwo { value } => {
                write!(f, "{value} is not a power of two")
            }
        }
    }
}

impl core::error::Error for Error {}
