//! Crate-wide error type.

use std::fmt;

use crate::algebra::Rational;

/// Everything that can go wrong across the engine. Variants carry the data a
/// caller needs to diagnose or recover (offsets, parameter names, values).
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Division by a scalar that is identically zero.
    DivisionByZero,
    /// Arithmetic attempted between values bound to different parameter names.
    ParameterMismatch { left: String, right: String },
    /// Parameter substitution hit a vanishing denominator.
    PoleAtValue { value: Rational },
    /// Series bases differ by a non-integer, so the terms cannot be merged.
    IncompatibleBase { gap: Rational },
    /// Truncated series with opposite trust directions cannot be combined.
    WindowMismatch,
    /// The operator has no degree-zero part, so there is no indicial polynomial.
    ZeroEulerPart,
    /// A degree-zero term carries a symbolic coefficient; the indicial
    /// polynomial must stay rational (bind the parameter first).
    SymbolicIndicial,
    /// F(lambda + k) = 0 was hit with a nonzero source coefficient at offset k.
    Resonance { offset: i64 },
    /// The requested anchor exponent is not a root of F.
    IndicialMismatch { lambda: Rational },
    /// The remainder operator mixes degree-raising and degree-lowering terms,
    /// so no coefficient window ever stabilizes.
    MixedDegreeRemainder,
    /// A resolvent factor 1/(D + c) met a monomial with exponent -c.
    ResolventPole { exponent: Rational },
    /// A family constructor was missing a required parameter.
    MissingParameter { family: String, name: String },
    /// Two series are not scalar multiples; reports the first offset at which
    /// proportionality fails.
    NotProportional { offset: i64 },
    /// The partition has more nonzero parts than there are variables.
    TooManyParts { parts: usize, nvars: usize },
    /// Pair division was asked on a polynomial that is not antisymmetric in
    /// the named pair of variables.
    NotDivisible,
    /// Two diagonal entries of the triangular system coincide, so the
    /// back-substitution would divide by zero.
    DegenerateEigenvalue { partition: Vec<u32> },
    /// The operator matrix violated dominance triangularity (internal check).
    NotTriangular,
    /// A certified solution failed its own residual check (internal check).
    ResidualNonzero,
    /// A solution document could not be reconstructed for verification.
    CorruptSolution(String),
    /// Operator DSL parse failure at a byte offset, with the expected tokens.
    Parse { offset: usize, expected: String },
    /// The DSL rejects negative powers of x, d and D.
    NegativePower { offset: usize },
    /// An identifier was neither bound nor designated as the free parameter.
    UnboundParameter { name: String },
    /// Two distinct identifiers were left free; at most one is allowed.
    TwoFreeParameters { first: String, second: String },
    /// Catch-all for malformed CLI input (bad partition string, bad flag...).
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::ParameterMismatch { left, right } => {
                write!(f, "parameter mismatch: `{left}` vs `{right}`")
            }
            Error::PoleAtValue { value } => {
                write!(f, "denominator vanishes at parameter value {value}")
            }
            Error::IncompatibleBase { gap } => {
                write!(f, "series bases differ by non-integer {gap}")
            }
            Error::WindowMismatch => {
                write!(f, "cannot combine series truncated in opposite directions")
            }
            Error::ZeroEulerPart => write!(f, "operator has no degree-zero part"),
            Error::SymbolicIndicial => {
                write!(f, "degree-zero part carries a symbolic coefficient")
            }
            Error::Resonance { offset } => {
                write!(f, "resonance: F(lambda + {offset}) = 0 with nonzero source")
            }
            Error::IndicialMismatch { lambda } => {
                write!(f, "{lambda} is not a root of the indicial polynomial")
            }
            Error::MixedDegreeRemainder => {
                write!(f, "remainder mixes positive- and negative-degree terms")
            }
            Error::ResolventPole { exponent } => {
                write!(f, "resolvent pole at monomial exponent {exponent}")
            }
            Error::MissingParameter { family, name } => {
                write!(f, "{family} requires parameter `{name}`")
            }
            Error::NotProportional { offset } => {
                write!(f, "series are not proportional (first mismatch at offset {offset})")
            }
            Error::TooManyParts { parts, nvars } => {
                write!(f, "partition has {parts} parts but only {nvars} variables")
            }
            Error::NotDivisible => write!(f, "polynomial is not divisible: input not antisymmetric"),
            Error::DegenerateEigenvalue { partition } => {
                write!(f, "degenerate eigenvalue at partition {partition:?}")
            }
            Error::NotTriangular => write!(f, "operator matrix is not dominance-triangular"),
            Error::ResidualNonzero => write!(f, "residual check failed"),
            Error::CorruptSolution(msg) => write!(f, "corrupt solution document: {msg}"),
            Error::Parse { offset, expected } => {
                write!(f, "parse error at byte {offset}: expected {expected}")
            }
            Error::NegativePower { offset } => {
                write!(f, "negative power rejected at byte {offset}")
            }
            Error::UnboundParameter { name } => write!(f, "unbound parameter `{name}`"),
            Error::TwoFreeParameters { first, second } => {
                write!(f, "two free parameters: `{first}` and `{second}`")
            }
            Error::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for Error {}
