use thiserror::Error;

/// Failures while reading numbers, points, matrices or ranges from text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("not a number: {0:?}")]
    InvalidNumber(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("expected {expected} components, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("invalid range {0:?}, expected a..b with a <= b")]
    InvalidRange(String),
    #[error("malformed JSON matrix: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("matrix determinant is {0}, expected 1")]
    NotUnimodular(String),
    #[error("matrix is singular")]
    Singular,
    #[error("{0} is not unipotent")]
    NotUnipotent(&'static str),
    #[error("point is off the character surface: P = {0}")]
    OffSurface(String),
    #[error("parameter point lies on the singular locus st - s^3 - 1 = 0")]
    SingularParameter,
    #[error("point requires b21 outside the rationals: {0}")]
    NotInField(String),
    #[error("first generator has unipotency index {0}; only maximally unipotent generators are supported")]
    UnsupportedJordanType(u8),
    #[error("representation is reducible (character is (3,3,3))")]
    Reducible,
    #[error("no conjugator found: {0}")]
    NoConjugator(String),
    #[error("invalid Diophantine triple: {0}")]
    InvalidTriple(String),
    #[error("a*b = {ab} does not divide 3k+l+3 = {value}")]
    DivisibilityFailure { ab: String, value: String },
    #[error("recursion index {index} exceeds cap {cap}")]
    IndexTooLarge { index: u64, cap: u64 },
    #[error("excluded Higgs parameter: {0}")]
    ExcludedParameter(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("Newton iteration did not converge after {iters} iterations (residual {residual:e})")]
    NonConvergence { iters: usize, residual: f64 },
    #[error("shape mismatch: expected {expected} nodes, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
