use thiserror::Error;

/// Every failure the library can report.
///
/// Variants are grouped by the module that raises them; [`Error::kind`]
/// gives the stable name used in machine-readable output.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // labels
    #[error("size mismatch: |{left}| = {left_len} but |{right}| = {right_len}")]
    SizeMismatch {
        left: String,
        left_len: usize,
        right: String,
        right_len: usize,
    },
    #[error("{sub} is not a subset of {sup}")]
    NotSubset { sub: String, sup: String },

    // parsing
    #[error("parse error at {pos}: {message}")]
    Parse { pos: usize, message: String },

    // formulas
    #[error("formula is not admissible: {0}")]
    Admissibility(String),
    #[error("not a pure membership formula: {0}")]
    NotPureInFormula(String),
    #[error("no quantifier domain supplied for `{0}`")]
    MissingDomain(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    // numbers
    #[error("division by zero")]
    DivisionByZero,
    #[error("{value} is not in level S{label}")]
    NotInLevel { value: String, label: String },
    #[error("unlimited at scale w{0}")]
    Unlimited(usize),
    #[error("{0} is a pole of the function")]
    PoleAtPoint(String),
    #[error("scale w{needed} requested but only {available} scales are configured")]
    ScaleExhausted { needed: usize, available: usize },

    // ultrafilter lab and combinatorics
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("unsupported formula: {0}")]
    UnsupportedFormula(String),
    #[error("window length {window} exceeds ground size {size}")]
    WindowTooLarge { window: usize, size: usize },
    #[error("no window qualifies")]
    NoQualifyingWindow,
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SizeMismatch { .. } => "SizeMismatch",
            Error::NotSubset { .. } => "NotSubset",
            Error::Parse { .. } => "ParseError",
            Error::Admissibility(_) => "AdmissibilityError",
            Error::NotPureInFormula(_) => "NotPureInFormula",
            Error::MissingDomain(_) => "MissingDomain",
            Error::UnboundVariable(_) => "UnboundVariable",
            Error::TypeMismatch(_) => "TypeMismatch",
            Error::DivisionByZero => "DivisionByZero",
            Error::NotInLevel { .. } => "NotInLevel",
            Error::Unlimited(_) => "Unlimited",
            Error::PoleAtPoint(_) => "PoleAtPoint",
            Error::ScaleExhausted { .. } => "ScaleExhausted",
            Error::TooLarge(_) => "TooLarge",
            Error::UnsupportedFormula(_) => "UnsupportedFormula",
            Error::WindowTooLarge { .. } => "WindowTooLarge",
            Error::NoQualifyingWindow => "NoQualifyingWindow",
            Error::Invalid(_) => "InvalidInput",
        }
    }

    /// Syntax-level failures, as opposed to domain errors.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }

    pub(crate) fn parse(pos: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
