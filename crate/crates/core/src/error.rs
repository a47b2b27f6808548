use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable-space mismatch")]
    SpaceMismatch,

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("division by zero")]
    DivisionByZero,

    #[error("pole at specialization: {0}")]
    PoleAtSpecialization(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("theory mismatch: {0}")]
    TheoryMismatch(String),

    #[error("split mismatch: {0}")]
    SplitMismatch(String),

    #[error("zero weight at fixed point {0}")]
    ZeroWeight(usize),

    #[error("no non-equivariant limit: pole at {0}")]
    NoNonEquivariantLimit(String),

    #[error("missing table entry for coweight {0:?}")]
    MissingTableEntry(Vec<i64>),

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("Cartan matrix is not of finite type: {0}")]
    NotFiniteType(String),

    #[error("Weyl group exceeds the size guard of {0} elements")]
    WeylGroupTooLarge(usize),

    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),

    #[error("cocharacter is not central: {0}")]
    NotCentral(String),

    #[error("sign hypothesis violated: {0}")]
    SignHypothesis(String),

    #[error("cocycle rule violated: {0}")]
    Cocycle(String),

    #[error("undetermined up to Novikov cutoff {0}")]
    Undetermined(u32),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown identifier `{name}` at line {line}, column {column}")]
    UnknownIdentifier {
        name: String,
        line: usize,
        column: usize,
    },

    #[error("arity mismatch at line {line}, column {column}: expected {expected} entries, got {got}")]
    Arity {
        line: usize,
        column: usize,
        expected: usize,
        got: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, got })
    }
}
