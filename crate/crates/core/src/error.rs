use thiserror::Error;

use crate::scalars::GaussRat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalar {0} is not invertible (only single-term scalars are)")]
    NotInvertible(String),
    #[error("branch parameter N must be odd, got {0}")]
    EvenBranch(i64),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("exponent {exponent} is not in the coset {coset} + Z")]
    Coset { exponent: GaussRat, coset: GaussRat },
    #[error("coefficient of depth {depth} exceeds the weight cutoff {cutoff}")]
    Cutoff { depth: i64, cutoff: usize },
    #[error("state is not homogeneous in its module label")]
    Inhomogeneous,
    #[error("operator requires a state in M_0, found label {0}")]
    NonzeroLabel(String),
    #[error("series offsets {0} and {1} differ by a non-integer")]
    OffsetMismatch(GaussRat, GaussRat),
    #[error("product window is empty: {0}")]
    EmptyWindow(String),
    #[error("gram matrix is not symmetric")]
    NonSymmetricGram,
    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("label {0} is not a lattice vector")]
    NotInLattice(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
