use thiserror::Error;

/// Errors raised by the algebra kernels.
///
/// The CLI maps every variant to a stable code via [`Error::code`], so the
/// set of codes must not be reshuffled.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector cannot be scaled to an integer vector")]
    ZeroVector,
    #[error("entry {index} is not rational (nonzero imaginary part)")]
    NonRationalEntry { index: usize },
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("input polynomial must be nonzero")]
    ZeroInput,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("coefficient field mismatch: {0}")]
    FieldMismatch(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("derivation image missing for variable `{0}`")]
    MissingImage(String),
    #[error("empty generator list")]
    EmptyInput,
    #[error("degree budget of {cap} exceeded (reached total degree {reached})")]
    DegreeBudgetExceeded { cap: u32, reached: u32 },
    #[error("input must be nonconstant")]
    ConstantInput,
    #[error("cofactor has unsupported shape: {0}")]
    BadCofactorShape(String),
    #[error("unsupported derivation: {0}")]
    UnsupportedDerivation(String),
    #[error("vector is not a cofactor relation")]
    NotARelation,
    #[error("root list incomplete or wrong: {0}")]
    IncompleteRoots(String),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("hypothesis does not hold: {0}")]
    NotApplicable(String),
    #[error("principal ideal is not differential")]
    NotDifferential,
    #[error("bad factorization: {0}")]
    BadFactorization(String),
    #[error("both derivation images are zero; every point is a zero")]
    ZeroField,
    #[error("no saturating candidate: {0}")]
    NoCandidate(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("imaginary unit `i` used in a rational ring at position {pos}")]
    ImaginaryInRationalField { pos: usize },
    #[error("invalid derivation spec: {0}")]
    InvalidSpec(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroVector => "ZeroVector",
            Error::NonRationalEntry { .. } => "NonRationalEntry",
            Error::NotDivisible => "NotDivisible",
            Error::DivisionByZero => "DivisionByZero",
            Error::BothZero => "BothZero",
            Error::ZeroInput => "ZeroInput",
            Error::UnknownVariable(_) => "UnknownVariable",
            Error::RingMismatch => "RingMismatch",
            Error::FieldMismatch(_) => "FieldMismatch",
            Error::InvalidRing(_) => "InvalidRing",
            Error::MissingImage(_) => "MissingImage",
            Error::EmptyInput => "EmptyInput",
            Error::DegreeBudgetExceeded { .. } => "DegreeBudgetExceeded",
            Error::ConstantInput => "ConstantInput",
            Error::BadCofactorShape(_) => "BadCofactorShape",
            Error::UnsupportedDerivation(_) => "UnsupportedDerivation",
            Error::NotARelation => "NotARelation",
            Error::IncompleteRoots(_) => "IncompleteRoots",
            Error::NotSquarefree => "NotSquarefree",
            Error::NotMonic => "NotMonic",
            Error::NotApplicable(_) => "NotApplicable",
            Error::NotDifferential => "NotDifferential",
            Error::BadFactorization(_) => "BadFactorization",
            Error::ZeroField => "ZeroField",
            Error::NoCandidate(_) => "NoCandidate",
            Error::UnsupportedShape(_) => "UnsupportedShape",
            Error::Syntax { .. } => "SyntaxError",
            Error::ImaginaryInRationalField { .. } => "ImaginaryInRationalField",
            Error::InvalidSpec(_) => "InvalidSpec",
        }
    }

    /// Whether the error comes from malformed user input rather than from the
    /// mathematics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::ImaginaryInRationalField { .. }
                | Error::UnknownVariable(_)
                | Error::InvalidSpec(_)
                | Error::InvalidRing(_)
                | Error::MissingImage(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
