use std::fmt;

use crate::enumerate::CountKind;

/// Errors shared across the library.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Error {
    /// A candidate base leaves some points uncovered, so it generates no
    /// topology on the full ground set. `missing` holds the uncovered points.
    Cover { n: usize, missing: u16 },
    /// A relation failed the preorder axioms.
    InvalidRelation { reason: &'static str },
    /// A family is not closed under the topology laws.
    NotATopology,
    /// Operands live on ground sets of different sizes.
    DimensionMismatch { expected: usize, got: usize },
    /// A point map is not a bijection.
    NotABijection,
    /// A modulus or cycle length that must be prime is not.
    NotPrime(u64),
    /// An input exceeds an enumeration or representation ceiling.
    TooLarge { what: &'static str, limit: usize, got: usize },
    /// An argument fell outside an operation's domain.
    OutOfRange { what: &'static str },
    /// A count table lacks a required entry.
    MissingEntry { kind: CountKind, n: usize },
    /// CRT moduli share a common factor.
    NotCoprime { a: u64, b: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Cover { n, missing } => {
                write!(f, "family does not cover the ground set of {n} points (missing ")?;
                let mut first = true;
                for x in 0..*n {
                    if missing & (1 << x) != 0 {
                        if !first {
                            write!(f, ",")?;
                        }
                        write!(f, "{x}")?;
                        first = false;
                    }
                }
                write!(f, ")")
            }
            Error::InvalidRelation { reason } => write!(f, "invalid relation: {reason}"),
            Error::NotATopology => write!(f, "family is not a topology"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "ground-set size mismatch: expected {expected}, got {got}")
            }
            Error::NotABijection => write!(f, "point map is not a bijection"),
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::TooLarge { what, limit, got } => {
                write!(f, "{what} supports at most {limit} points, got {got}")
            }
            Error::OutOfRange { what } => write!(f, "out of range: {what}"),
            Error::MissingEntry { kind, n } => write!(f, "count table lacks {kind}({n})"),
            Error::NotCoprime { a, b } => write!(f, "moduli {a} and {b} are not coprime"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
