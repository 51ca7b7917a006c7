use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown affine type {0}")]
    UnknownType(String),
    #[error("level must be positive, got {0}")]
    LevelNonPositive(i64),
    #[error("weight {0} is not dominant")]
    NotDominant(String),
    #[error("weight {0} has non-integral labels")]
    NotIntegral(String),
    #[error("weight {0} has non-integral labels")]
    NonIntegralWeight(String),
    #[error("translation lattice inconsistent with the algebra data: {0}")]
    InvalidLattice(String),
    #[error("weight {0} is not regular")]
    NotRegular(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("character evaluation hit a singular point (|denominator| = {0:e})")]
    SingularPoint(f64),
    #[error("weight {0} is not in the basis")]
    WeightNotInBasis(String),
    #[error("Verlinde entry {value} at ({i},{j},{k}) is too far from an integer")]
    NearHalfInteger { i: usize, j: usize, k: usize, value: f64 },
    #[error("{0} is untwisted")]
    UntwistedType(String),
    #[error("{0} has a single root length")]
    SingleRootLength(String),
    #[error("operation not supported for {0}")]
    Unsupported(String),
    #[error("Kac-Walton and Verlinde disagree at ({i},{j},{k}): {exact} vs {numeric}")]
    VerlindeMismatch { i: usize, j: usize, k: usize, exact: i64, numeric: i64 },
    #[error("beta fails the congruence condition: {0}")]
    InvalidBeta(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
