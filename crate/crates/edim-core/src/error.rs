use thiserror::Error;

/// Errors shared across the library.
///
/// `DefiningPrime` is deliberately distinct from the other rejection kinds:
/// the case l = p is a different theory with different answers, not a
/// malformed input, and callers map it to its own exit path.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EdError {
    /// Malformed input: non-prime where a prime is required, zero where a
    /// positive integer is required, and similar.
    #[error("bad parameter: {0}")]
    BadParameter(String),

    /// l equals the defining characteristic p of the field.
    #[error("l = {l} is the defining prime of F_{{{p}^r}}; the cross-characteristic formulas do not apply")]
    DefiningPrime { l: u64, p: u64 },

    /// Structurally valid input outside the supported theory
    /// (for example l = 2 with q = 3 mod 4 for linear families).
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),

    /// An exhaustive construction would exceed the element budget.
    #[error("budget exceeded: need more than {budget} elements ({context})")]
    BudgetExceeded { budget: u64, context: String },
}

pub type EdResult2<T> = Result<T, EdError>;
