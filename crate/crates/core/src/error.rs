use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two vectors (or a vector and a matrix) disagree on length.
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    /// A 1-based column index fell outside `1..=n`.
    #[error("column index {index} out of range 1..={n}")]
    ColumnOutOfRange { index: usize, n: usize },

    /// An enumeration would exceed the configured subset budget.
    #[error("enumeration needs {required} subsets, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    /// A real-valued argument fell outside its admissible interval.
    #[error("argument {value} outside domain {domain}")]
    OutsideDomain { value: f64, domain: &'static str },

    /// A parameter set failed validation.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The randomized construction was rejected on every attempt.
    #[error("construction rejected after {attempts} attempts")]
    RetriesExhausted { attempts: u32 },

    /// A matrix file (or bit string) failed to parse.
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A parse failure in the matrix text format, with 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed header, expected `t n` with positive decimal integers")]
    MalformedHeader,
    #[error("t and n must be at least 1")]
    ZeroDimension,
    #[error("row has {actual} characters, expected {expected}")]
    RaggedRow { expected: usize, actual: usize },
    #[error("illegal character {found:?}, expected '0' or '1'")]
    IllegalCharacter { found: char },
    #[error("expected {expected} rows, found {actual}")]
    MissingRows { expected: usize, actual: usize },
    #[error("trailing content after the last matrix row")]
    TrailingContent,
    #[error("line is not newline-terminated")]
    MissingNewline,
}
