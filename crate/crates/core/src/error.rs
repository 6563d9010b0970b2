use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenPrime,
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("attempted to invert zero")]
    ZeroInverse,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("size parameter {0} exceeds the supported bound")]
    TooLarge(u32),
    #[error("bad composition: {0}")]
    BadComposition(String),
    #[error("g_k is only defined for odd k, got {0}")]
    EvenIndex(u32),
    #[error("singular curve: {0}")]
    SingularCurve(String),
    #[error("no elimination pipeline exists for p = {0}")]
    UnsupportedP(u64),
    #[error("system has a positive-dimensional solution set")]
    PositiveDimensional,
    #[error("det of the p-curvature has a nonzero x^{0} coefficient")]
    SupportViolation(usize),
    #[error("bad eigenvalue pair ({0}, {1}) for p = {2}")]
    BadAlpha(u64, u64, u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
