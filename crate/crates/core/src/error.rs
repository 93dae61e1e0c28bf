use thiserror::Error;

/// Everything that can go wrong in the library. Witnesses are rendered in the
/// element text grammar so they can be pasted back into an instance file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("backend mismatch: {left} vs {right}")]
    BackendMismatch { left: String, right: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {what} `{input}`: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("exponent {exponent} is not in the value group of {field}")]
    ExponentNotInGroup { exponent: String, field: String },
    #[error("invalid field descriptor: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("duplicate domain point {0}")]
    DuplicatePoint(String),
    #[error("not 1-Lipschitz: |f({x}) - f({y})| = {lhs} exceeds |{x} - {y}| = {rhs}")]
    NotLipschitz {
        x: String,
        y: String,
        lhs: String,
        rhs: String,
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("hypothesis violated on the pair ({a}, {b}): {reason}")]
    HypothesisViolation { a: String, b: String, reason: String },
    #[error("not a risometry: {0}")]
    NotRisometry(String),
    #[error("cells {first} and {second} overlap at {witness}")]
    OverlappingCells {
        first: usize,
        second: usize,
        witness: String,
    },
    #[error("cell {0} contains its own center")]
    CenterInCell(usize),
    #[error("cell {cell} cannot be re-centered at {point}: {reason}")]
    NotRecenterable {
        cell: usize,
        point: String,
        reason: String,
    },
    #[error("configuration mismatch: {0}")]
    ConfigurationMismatch(String),
    #[error("value {value} at origin {point} does not vanish")]
    NonVanishingAtOrigin { point: String, value: String },
    #[error("schema violation: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
