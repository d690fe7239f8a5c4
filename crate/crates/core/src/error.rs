use thiserror::Error;

/// Errors raised by the algebraic routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree {from} does not divide target degree {to}")]
    NonDivisibleDegree { from: u32, to: u32 },
    #[error("field degree {0} is outside the supported tower 1..=24")]
    UnsupportedDegree(u32),
    #[error("operation needs a nonzero field element")]
    ZeroElement,
    #[error("field degrees differ: {0} vs {1}; embed to a common degree first")]
    DegreeMismatch(u32, u32),
    #[error("element does not lie in GF(2^{0})")]
    NotInSubfield(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix does not have determinant 1")]
    NotDeterminantOne,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("eigenvalues need a field of degree {0} > 24")]
    FieldTowerExceeded(u32),
    #[error("unsupported rank n = {0} for this operation")]
    UnsupportedRank(usize),
    #[error("element is not isolated")]
    NotIsolated,
    #[error("sampling did not stabilize: {0}")]
    SamplingInconclusive(String),
    #[error("point-count slopes are not integral and stable: {0}")]
    NonIntegralSlope(String),
    #[error("memory budget exceeded: {0}")]
    MemoryBudgetExceeded(String),
    #[error("work budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("truncated induction is not unique: {0}")]
    NonUniqueTruncation(String),
    #[error("unsupported group size: {0}")]
    UnsupportedSize(String),
    #[error("consistency failure: {0}")]
    ConsistencyFailure(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
