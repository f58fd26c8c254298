use std::fmt;

use thiserror::Error;

/// Which exact-division or bound check rejected a ciphertext during decryption.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntegrityCheck {
    /// `c_i` is not a multiple of `ΔQ_i`.
    DeltaQ,
    /// The carried value `S_{i+1}` is not a multiple of `ΔR_i`.
    DeltaR,
    /// The recovered remainder is not below `∇_i`, so it could not have been produced by encryption.
    Remainder,
    /// `S_1` is not a multiple of `P0`.
    P0,
}

impl IntegrityCheck {
    pub fn as_str(self) -> &'static str {
        match self {
            IntegrityCheck::DeltaQ => "deltaQ",
            IntegrityCheck::DeltaR => "deltaR",
            IntegrityCheck::Remainder => "remainder",
            IntegrityCheck::P0 => "p0",
        }
    }
}

impl fmt::Display for IntegrityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single broken key invariant, as reported by [`crate::validate_key`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyNabla,
    NablaNotDecreasing { index: usize },
    NablaLastNotOne,
    LengthMismatch { field: &'static str, expected: usize, found: usize },
    ZeroDeltaQ { index: usize },
    ZeroDeltaR { index: usize },
    ZeroP0,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyNabla => write!(f, "nabla is empty"),
            Violation::NablaNotDecreasing { index } => {
                write!(f, "nabla not strictly decreasing at position {index}")
            }
            Violation::NablaLastNotOne => write!(f, "nabla last element is not 1"),
            Violation::LengthMismatch { field, expected, found } => {
                write!(f, "length mismatch: {field} has {found} elements, expected {expected}")
            }
            Violation::ZeroDeltaQ { index } => write!(f, "deltaQ[{index}] is zero"),
            Violation::ZeroDeltaR { index } => write!(f, "deltaR[{index}] is zero"),
            Violation::ZeroP0 => write!(f, "p0 is zero"),
        }
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("value does not fit in {bit_len} bits")]
    Range { bit_len: u64 },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid nabla: {}", join_violations(.0))]
    InvalidNabla(Vec<Violation>),

    #[error("invalid key: {}", join_violations(.0))]
    InvalidKey(Vec<Violation>),

    /// Decryption failed a consistency check. `index` is 1-based; 0 refers to `P0`.
    #[error("integrity check failed at position {index} ({check})")]
    Integrity { index: usize, check: IntegrityCheck },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("key space of {size} candidates exceeds budget of {cap}")]
    BudgetExceeded { size: String, cap: u128 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("bit length {0} is not a whole number of bytes")]
    NotByteAligned(u64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
