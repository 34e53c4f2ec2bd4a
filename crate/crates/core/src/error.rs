use thiserror::Error;

use crate::algebra::Polynomial;

/// Errors raised anywhere in the library.
///
/// Variants split into two families: input problems (bad files, malformed
/// arrangements, out-of-range requests) and internal invariant failures
/// (a form that should have been logarithmic was not). The CLI maps the
/// first family to exit code 1 and the second to exit code 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomials live in different rings ({0} vs {1} variables)")]
    MismatchedArity(usize, usize),

    #[error("polynomial is not divisible by the linear form (remainder {remainder})")]
    NonDivisible { remainder: Polynomial },

    #[error("vector is not in the span of the target basis: {0}")]
    Inconsistent(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("hyperplanes {0} and {1} are proportional; the arrangement is not reduced")]
    NotReduced(usize, usize),

    #[error("hyperplane {0} is the zero form")]
    ZeroForm(usize),

    #[error("arrangement has no hyperplanes")]
    EmptyArrangement,

    #[error("hyperplane {index} has {found} coefficients, expected {expected}")]
    WrongLength {
        index: usize,
        found: usize,
        expected: usize,
    },

    #[error("expected {expected} weights, got {found}")]
    WeightCount { expected: usize, found: usize },

    #[error("invalid factorization: {0}")]
    BadFactorization(String),

    #[error("form degree {j} out of range for {n} variables")]
    FormDegree { j: usize, n: usize },

    #[error("numerator degree {degree} exceeds the bound {bound}")]
    DegreeBound { degree: i64, bound: i64 },

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures that indicate a bug or a broken mathematical
    /// invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::NonDivisible { .. } | Error::Inconsistent(_) | Error::Invariant(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
