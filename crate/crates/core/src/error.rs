use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("not a permutation matrix: {0}")]
    NotAPermutationMatrix(String),

    #[error("letter {letter} outside 1..={n}")]
    LetterOutOfRange { letter: usize, n: usize },

    #[error("block of size {block} does not fit a {rows}x{cols} torus")]
    BlockTooLarge { block: usize, rows: usize, cols: usize },

    #[error("column {0} is not a basis vector")]
    ColumnNotBasisVector(usize),

    #[error("too few columns: {cols} < {needed}")]
    TooFewColumns { cols: usize, needed: usize },

    #[error("torus must have exactly {expected} rows, found {found}")]
    RowCountMismatch { expected: usize, found: usize },

    #[error("n = {n} exceeds the supported limit of {limit}")]
    BudgetExceeded { n: usize, limit: usize },

    #[error("no superpermutation matrix with at most {0} columns")]
    NotFound(usize),

    #[error("word is not universal: {missing} classes missing")]
    NotUniversal { missing: usize },

    #[error("malformed path: {0}")]
    MalformedPath(String),

    #[error("{d} does not divide {n}")]
    NotADivisor { d: usize, n: usize },

    #[error("{0} is not prime")]
    NotPrime(usize),

    #[error("n = {n} is outside the formula's domain (needs n >= {min})")]
    OutOfDomain { n: usize, min: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
