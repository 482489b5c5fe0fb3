use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A multiplicative rule could not produce a value at `p^k`.
    #[error("rule evaluation failed at {p}^{k}: {message}")]
    Rule { p: u64, k: u32, message: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Dirichlet inverse requested for a function with `f(1) = 0`.
    #[error("function is not Dirichlet invertible: f(1) = 0")]
    NotInvertible,

    #[error("{what} {value} is outside the available range [1, {limit}]")]
    Range {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("invalid specification: {0}")]
    Spec(String),

    #[error("complexity cap exceeded: {0}")]
    Complexity(String),

    #[error("f is not multiplicative (no multiplicative rule attached to the pair)")]
    NotMultiplicative,

    /// The constant in the support lower bound degenerates to zero.
    #[error("degenerate constant: {0}")]
    DegenerateConstant(String),

    /// A declared tail regime is required but was left unknown.
    #[error("unknown tail: {0}")]
    UnknownTail(String),

    /// An input falls outside the hypotheses of the operation.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

impl Error {
    /// Coarse classification used by front ends to pick exit codes.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Rule { .. } | Error::Shape(_) | Error::Range { .. } | Error::Spec(_) => {
                ErrorKind::Spec
            }
            Error::Complexity(_) => ErrorKind::Complexity,
            Error::NotInvertible
            | Error::NotMultiplicative
            | Error::DegenerateConstant(_)
            | Error::UnknownTail(_)
            | Error::Hypothesis(_) => ErrorKind::Hypothesis,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Spec,
    Hypothesis,
    Complexity,
}
