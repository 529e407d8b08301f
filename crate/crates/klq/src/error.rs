//! Error type shared by the whole crate.

use std::fmt;

/// Errors reported by validation, arithmetic, and parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A coefficient computation left the range of `i64`.
    Overflow,
    /// Two group elements of different degrees were combined.
    DegreeMismatch(usize, usize),
    /// Two matrices with different row/column sum specifications were combined.
    SpecMismatch,
    /// A position or entry index lies outside the valid range.
    IndexOutOfRange(String),
    /// A precondition of the form `y <= w` does not hold.
    NotComparable,
    /// The dimension vectors of two multisegments differ.
    DimensionMismatch,
    /// A structural precondition failed (invalid permutation word, bad
    /// partition, nontrivial stabilizer where a trivial one is required, ...).
    Invalid(String),
    /// Input text or JSON could not be parsed.
    Parse(String),
    /// Two independently computed routes to the same value disagreed.
    CrossCheck(String),
    /// Rejection sampling gave up.
    SamplingExhausted,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Overflow => write!(f, "integer overflow in exact arithmetic"),
            Error::DegreeMismatch(a, b) => write!(f, "degree mismatch: {a} vs {b}"),
            Error::SpecMismatch => write!(f, "row/column sum specifications do not match"),
            Error::IndexOutOfRange(s) => write!(f, "index out of range: {s}"),
            Error::NotComparable => write!(f, "elements are not comparable in Bruhat order"),
            Error::DimensionMismatch => write!(f, "dimension vectors differ"),
            Error::Invalid(s) => write!(f, "invalid input: {s}"),
            Error::Parse(s) => write!(f, "parse error: {s}"),
            Error::CrossCheck(s) => write!(f, "internal cross-check failed: {s}"),
            Error::SamplingExhausted => write!(f, "rejection sampling exhausted its attempt budget"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
