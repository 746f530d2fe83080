use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("fractional part requested for a negative value")]
    FracOfNegative,
    #[error("{0} is not a unit of Z[phi]")]
    NotAUnit(String),
    #[error("{0} is not positive")]
    NotPositive(String),
    #[error("matrix determinant is {0}, expected 1")]
    NotUnimodular(String),
    #[error("vector ({0}) is outside the closed first quadrant")]
    OutOfQuadrant(String),
    #[error("zero vector")]
    ZeroVector,
    #[error("vector is not in sector {0}")]
    WrongSector(u8),
    #[error("run along the terminal ray is unbounded")]
    Unbounded,
    #[error("descent exceeded the iteration cap of {0}")]
    IterationCap(usize),
    #[error("n = {0} must be even and at least 4")]
    BadParity(i64),
    #[error("k = {0} must be greater than 1")]
    BadK(i64),
    #[error("continued fraction input must exceed 1")]
    NonPositive,
    #[error("index {0} is out of the computed range")]
    IndexOutOfRange(usize),
    #[error("rho is rational; use the containment check instead")]
    RationalRho,
    #[error("invalid rational rho: {0}")]
    BadRational(String),
    #[error("point budget of {0} exceeded")]
    CapacityExceeded(usize),
    #[error("need at least two points")]
    TooFew,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("output error: {0}")]
    Io(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Returns `Err(Error::Invariant)` with the formatted message unless `cond` holds.
macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::Invariant(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
