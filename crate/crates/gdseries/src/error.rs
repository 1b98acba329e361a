use num::BigRational;

/// Errors shared by every layer of the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("exponent {0} has a denominator that does not divide the root degree")]
    ExponentDenominatorMismatch(BigRational),
    #[error("operands belong to different field specs")]
    SpecMismatch,
    #[error("division by zero in Q(alpha^(1/D))")]
    DivisionByZero,
    #[error("operands use different marking-variable sets")]
    VariableSetMismatch,
    #[error("analytic composition requires a series with zero constant term")]
    NonzeroConstantTerm,
    #[error("{op} requires a series with constant term {expected}")]
    BadConstantTerm { op: &'static str, expected: &'static str },
    #[error("constant series was supplied up to order {have} but order {want} was requested")]
    TruncationTooShort { have: usize, want: usize },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("family `{0}` is only defined for alpha = 2")]
    UnsupportedAlpha(String),
    #[error("expression has growth grade {grade}, larger than the requested beta {beta}")]
    GradeTooHigh { grade: u32, beta: u32 },
    #[error("enumeration size n = {n} exceeds the hard cap {limit} (use the unsafe escape hatch to override)")]
    SizeLimit { n: usize, limit: usize },
    #[error("Wright recurrence mismatch at n = {n}")]
    RecurrenceMismatch { n: usize },
    #[error("2-SAT calibration is ambiguous: more than one clause universe matches the series")]
    CalibrationAmbiguous,
    #[error("2-SAT calibration failed: no clause universe matches the series")]
    CalibrationFailed,
    #[error("count is not an integer: {0}")]
    NonIntegerCount(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
