use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("interval-finiteness violated: {0}")]
    IntervalFiniteness(String),

    #[error("vertex outside the quiver: {0}")]
    OutOfRange(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("not a morphism of representations: {0}")]
    NotAMorphism(String),

    #[error("Hom space may be infinite-dimensional: {0}")]
    HomMayBeInfinite(String),

    #[error("object is not in rrep: {0}")]
    NotInRrep(String),

    #[error("translate undefined: {0}")]
    TauUndefined(String),

    #[error("object is not indecomposable: {0}")]
    NotIndecomposable(String),

    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("not yet certified: {0}")]
    Uncertified(String),
}

impl Error {
    /// True for failures caused by running out of search budget, as opposed
    /// to a mathematical or input problem.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExhausted(_) | Error::Uncertified(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
