use thiserror::Error;

use crate::numerics::NumericsError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("mesh needs at least 2 elements, got {0}")]
    TooFewElements(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("vector length {found} does not match {expected} degrees of freedom")]
    LengthMismatch { expected: usize, found: usize },
    #[error("need at least {needed} time states, got {found}")]
    TooFewStates { needed: usize, found: usize },
    #[error("basis size r = {r} outside 1..={rank}")]
    RankOutOfRange { r: usize, rank: usize },
    #[error("POD data set is identically zero")]
    ZeroData,
    #[error("no pointwise bound is known for {0} POD data")]
    NoBoundForMethod(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
