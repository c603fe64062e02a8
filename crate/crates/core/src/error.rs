use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall into three families, see [`ErrorClass`]: invalid input,
/// exhausted budgets, and violated internal identities (which indicate a bug).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base {0} is not a prime")]
    NonPrimeBase(u32),
    #[error("modulus has degree {got}, expected {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("coefficient {value} is not reduced modulo {q}")]
    BadCoefficient { value: u32, q: u32 },
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("field of order {q}^{m} is too large")]
    FieldTooLarge { q: u32, m: usize },
    #[error("malformed element token `{0}`")]
    BadToken(String),
    #[error("`w^e` tokens need a primitive modulus")]
    NonPrimitiveExponentiation,
    #[error("operands live in different fields")]
    SpecMismatch,
    #[error("zero has no inverse")]
    ZeroInversion,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,
    #[error("{what} needs {needed} items, budget is {budget}")]
    BudgetExceeded { what: &'static str, needed: u128, budget: u128 },
    #[error("exponent pair ({0}, {1}) is outside the substitution's support")]
    UnsupportedExponent(u32, u32),
    #[error("rank {numerator}/{m} is not an integer")]
    NonIntegerRank { numerator: usize, m: usize },
    #[error("rank axiom {axiom} fails: {detail}")]
    AxiomViolation { axiom: &'static str, detail: String },
    #[error("invalid spread: {0}")]
    InvalidSpread(String),
    #[error("{k} does not divide {n}")]
    NonDividing { k: usize, n: usize },
    #[error("no extension degree up to {0} satisfies the non-negativity conditions")]
    CapExceeded(u32),
    #[error("generator matrix has dependent rows (rank {rank} < {rows}); row-reduce it first")]
    DependentRows { rank: usize, rows: usize },
    #[error("inconsistent parameters: {0}")]
    InconsistentParameters(String),
    #[error("polynomial is not in the image: {0}")]
    NotInImage(String),
    #[error("malformed enumerator: {0}")]
    MalformedEnumerator(String),
    #[error("operation needs a represented q-matroid")]
    NotRepresented,
    #[error("identity {name} violated at {row},{col}")]
    IdentityViolation { name: String, row: usize, col: usize },
    #[error("invalid polynomial `{0}`")]
    BadPolynomial(String),
    #[error("invalid descriptor: {0}")]
    BadDescriptor(String),
}

/// Coarse classification used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Budget,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::BudgetExceeded { .. } | Error::CapExceeded(_) => ErrorClass::Budget,
            Error::NonIntegerRank { .. } | Error::IdentityViolation { .. } => ErrorClass::Internal,
            _ => ErrorClass::Validation,
        }
    }

    /// Short machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonPrimeBase(_) => "NonPrimeBase",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::NotMonic => "NotMonic",
            Error::BadCoefficient { .. } => "BadCoefficient",
            Error::ReducibleModulus(_) => "ReducibleModulus",
            Error::FieldTooLarge { .. } => "FieldTooLarge",
            Error::BadToken(_) => "BadToken",
            Error::NonPrimitiveExponentiation => "NonPrimitiveExponentiation",
            Error::SpecMismatch => "SpecMismatch",
            Error::ZeroInversion => "ZeroInversion",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::AmbientMismatch => "AmbientMismatch",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::UnsupportedExponent(..) => "UnsupportedExponent",
            Error::NonIntegerRank { .. } => "NonIntegerRank",
            Error::AxiomViolation { .. } => "AxiomViolation",
            Error::InvalidSpread(_) => "InvalidSpread",
            Error::NonDividing { .. } => "NonDividing",
            Error::CapExceeded(_) => "CapExceeded",
            Error::DependentRows { .. } => "DependentRows",
            Error::InconsistentParameters(_) => "InconsistentParameters",
            Error::NotInImage(_) => "NotInImage",
            Error::MalformedEnumerator(_) => "MalformedEnumerator",
            Error::NotRepresented => "NotRepresented",
            Error::IdentityViolation { .. } => "IdentityViolation",
            Error::BadPolynomial(_) => "BadPolynomial",
            Error::BadDescriptor(_) => "BadDescriptor",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
