use thiserror::Error;

/// Errors raised by constructors and operations of this crate.
///
/// Mathematical *failures* (a map that is not a cocycle, a Jacobi identity that
/// does not hold on a random sweep) are usually reported inside report structs
/// rather than as errors; this type is for malformed input and usage mistakes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("division by zero in GF({p})")]
    DivisionByZero { p: u32 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field mismatch: GF({0}) and GF({1})")]
    FieldMismatch(u32, u32),
    #[error("bracket is not alternating at [e{i}, e{j}]")]
    NotAlternating { i: usize, j: usize },
    #[error("Jacobi identity fails on basis triple ({i}, {j}, {k})")]
    JacobiFails { i: usize, j: usize, k: usize },
    #[error("no p-map with these images: ad(e{index})^p differs from ad(e{index}^[p])")]
    NotRestricted { index: usize },
    #[error("characteristic {p} is not supported here: {reason}")]
    Characteristic { p: u32, reason: &'static str },
    #[error("degree {degree} exceeds the supported cap {cap}")]
    DegreeTooLarge { degree: usize, cap: usize },
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("the algebra is not abelian")]
    NotAbelian,
    #[error("input is not a cocycle")]
    NotCocycle,
    #[error("basis check and exhaustive oracle disagree: {0}")]
    OracleMismatch(String),
    #[error("not a Nijenhuis operator: identity {identity} fails at {witness}")]
    NotNijenhuis { identity: usize, witness: String },
    #[error("not a restricted multiderivation: {axiom} fails at {witness}")]
    NotMultiderivation { axiom: String, witness: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
