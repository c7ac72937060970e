use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mismatched radicands: sqrt({0}) vs sqrt({1})")]
    MismatchedRadicand(u64, u64),
    #[error("radicand {0} is not a squarefree integer >= 2")]
    InvalidRadicand(u64),
    #[error("empty interval")]
    EmptyInterval,
    #[error("index {0} is not in the index set of the group")]
    IndexOutOfRange(String),
    #[error("{0} is not an element of the group")]
    NotInGroup(String),
    #[error("descriptor mismatch: {0}")]
    DescriptorMismatch(String),
    #[error("element is not in the valuation ring")]
    NotInValuationRing,
    #[error("exponent {0} is not 2-divisible in the group")]
    ExponentNotDivisible(String),
    #[error("coefficient {0} is not a square in the coefficient field")]
    CoefficientNotSquare(String),
    #[error("series must be positive")]
    NotPositive,
    #[error("no violation exists for this element")]
    NoViolation,
    #[error("case unavailable: {0}")]
    CaseUnavailable(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }
}
