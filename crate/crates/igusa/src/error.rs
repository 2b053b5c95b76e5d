//! Crate-wide error type.

use thiserror::Error;

/// Errors shared by all modules of the toolkit.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Residue enumeration would examine more tuples than the configured budget.
    #[error("enumeration budget exceeded: needs {needed} tuples, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    /// Coset base point is not representable at the stated levels.
    #[error("invalid coset: {0}")]
    InvalidCoset(String),

    /// Division of rational functions by zero.
    #[error("division by zero")]
    DivisionByZero,

    /// Not enough series terms to solve for the requested rational function.
    #[error("underdetermined fit: {have} series terms, need at least {need}")]
    Underdetermined { have: usize, need: usize },

    /// No candidate denominator reproduces the held-out series terms.
    #[error("inconsistent fit: no ansatz member matches the series at order {failing_order}")]
    Inconsistent { failing_order: usize },

    /// Measure twists must be integer powers of |f|.
    #[error("non-integer measure twist")]
    NonIntegerTwist,

    /// Group element outside the permitted p-power acting set.
    #[error("unsupported group element: {0}")]
    UnsupportedElement(String),

    /// A ramified character was used where an exact power of q is required.
    #[error("ramified character not supported here: {0}")]
    RamifiedCharacter(String),

    /// A character exponent had to be an integer but was not.
    #[error("character exponent is not an integer: {0}")]
    NonIntegerExponent(String),

    /// Vector/lattice arity mismatch.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Raised only when the separating-element precondition is violated.
    #[error("no separating element: the character lies in the rational span of the sublattice")]
    NoSeparator,

    /// Character shape does not match the group.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Wrong number of group elements supplied to a criterion.
    #[error("wrong arity: expected {expected} elements, got {got}")]
    WrongArity { expected: usize, got: usize },

    /// Unknown scenario family.
    #[error("unsupported scenario family: {0}")]
    UnsupportedFamily(String),

    /// Malformed character specification string.
    #[error("bad character string: {0}")]
    BadCharacterString(String),

    /// Malformed group specification string.
    #[error("bad group string: {0}")]
    BadGroupString(String),

    /// Scenario data failed validation.
    #[error("bad scenario: {0}")]
    BadScenario(String),

    /// Malformed JSON input.
    #[error("json: {0}")]
    Json(String),

    /// A candidate functional diverges on the supplied test function.
    #[error("functional diverges: {0}")]
    Divergent(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
