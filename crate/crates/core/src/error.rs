use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("characteristic 2 is not supported")]
    CharTwo,
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("prime {0} is too large for machine residues")]
    PrimeTooLarge(u64),
    #[error("extension parameter {0} is a square in the base field")]
    SquareParameter(String),
    #[error("quadratic extensions must sit over the rationals or a prime field")]
    NestedExtension,
    #[error("bad generator pair ({i}, {j}): need 1 <= i < j <= n")]
    BadIndex { i: usize, j: usize },
    #[error("{what}: expected {expected} entries, got {got}")]
    Arity {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("operands live in different algebras")]
    AlgebraMismatch,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("{0:?} is not a subset of {1:?}")]
    NotSubset(Vec<usize>, Vec<usize>),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid coaction: {0}")]
    InvalidCoaction(String),
    #[error("invalid tuple: {0}")]
    InvalidTuple(String),
    #[error("operator is not an algebra automorphism")]
    NotAutomorphism,
    #[error("tuples come from different branches")]
    FlagMismatch,
    #[error("n must be even")]
    NotEven,
    #[error("algebra is not semisimple")]
    NotSemisimple,
    #[error("delta is not a square in the ground field")]
    DeltaNotSquare,
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
