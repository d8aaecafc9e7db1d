//! Error type shared by all modules.

use std::fmt;

/// An error produced by an exact computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EqError {
    /// Two values built over different variable contexts were combined.
    ContextMismatch { left: String, right: String },
    /// Division by the zero rational function or polynomial.
    DivisionByZero,
    /// A substitution made a denominator vanish identically.
    DenominatorVanishes,
    /// A series inverse/quotient does not exist at the requested point.
    Pole { order: usize },
    /// A sum of localization fractions failed to simplify to a polynomial.
    NotPolynomial { residual: String },
    /// Parse error with byte position in the input.
    Parse { pos: usize, message: String },
    /// A zero weight where a tangent/Euler weight is required.
    ZeroWeight,
    /// Repeated characters make fixed points non-isolated.
    RepeatedCharacters,
    /// Malformed JSON or wrong schema.
    Json(String),
    /// Anything else (precondition violations, bad scenario arguments).
    Invalid(String),
}

impl fmt::Display for EqError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EqError::ContextMismatch { left, right } => {
                write!(f, "context mismatch: {} vs {}", left, right)
            }
            EqError::DivisionByZero => write!(f, "division by zero"),
            EqError::DenominatorVanishes => {
                write!(f, "denominator vanishes identically after substitution")
            }
            EqError::Pole { order } => write!(f, "pole of order {} at the expansion point", order),
            EqError::NotPolynomial { residual } => {
                write!(f, "sum failed to simplify to a polynomial; residual {}", residual)
            }
            EqError::Parse { pos, message } => write!(f, "parse error at byte {}: {}", pos, message),
            EqError::ZeroWeight => write!(f, "zero weight in a tangent/Euler position"),
            EqError::RepeatedCharacters => {
                write!(f, "repeated characters (fixed points are not isolated)")
            }
            EqError::Json(msg) => write!(f, "bad JSON: {}", msg),
            EqError::Invalid(msg) => write!(f, "{}", msg),
        }
    }
}

impl std::error::Error for EqError {}

pub type Result<T> = std::result::Result<T, EqError>;
