use thiserror::Error;

/// Every failure the library can report.
///
/// Variants that end in `Violated`/`AssertionFailed` indicate that a
/// certified inequality or a structural invariant did not hold; they are
/// bug detectors rather than user errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("polynomial degree {0} is too small for this operation")]
    DegreeTooSmall(usize),
    #[error("polynomial content is {0}, expected 1")]
    NotPrimitiveContent(String),
    #[error("root approximation failed to certify after {0} iterations")]
    NoConvergence(usize),
    #[error("inequality violated: {0}")]
    InequalityViolated(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("element is zero")]
    ZeroElement,
    #[error("the given elements do not generate the ambient field of degree {0}")]
    NotGenerating(usize),
    #[error("polynomial vanishes identically modulo {0}")]
    ZeroReduction(u64),
    #[error("search exhausted all primes up to {0}")]
    SearchExhausted(u64),
    #[error("internal assertion failed: {0}")]
    InternalAssertionFailed(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("factorization effort exhausted on {0}")]
    FactorizationTimeout(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("residue {0} is not a simple root modulo {1}")]
    NotSimpleRoot(String, u64),
    #[error("valuation of zero is infinite")]
    ZeroValuation,
    #[error("valuation undetermined at precision {0}")]
    PrecisionExhausted(u32),
    #[error("missing input `{0}`")]
    MissingInput(String),
    #[error("unknown bound `{0}`")]
    UnknownBound(String),
    #[error("{0} and {1} are not both prime")]
    NotPrimePair(u64, u64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
