use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::cipher::Ciphertext;
use crate::error::{Error, Result};

/// Common factor of two same-position ciphertext values.
///
/// Every value at position `i` is a multiple of `ΔQ_i`, so for two
/// ciphertexts made under one key, `ΔQ_i` divides `gcd`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeakRecord {
    /// 1-based position.
    pub index: usize,
    pub gcd: BigUint,
    pub leaks: bool,
}

/// Position-wise gcds of two ciphertexts the caller believes share a key.
pub fn reuse_leakage(c1: &Ciphertext, c2: &Ciphertext) -> Result<Vec<LeakRecord>> {
    if c1.values.len() != c2.values.len() {
        return Err(Error::LengthMismatch { expected: c1.values.len(), found: c2.values.len() });
    }
    Ok(c1
        .values
        .iter()
        .zip(&c2.values)
        .enumerate()
        .map(|(i, (a, b))| {
            let gcd = a.gcd(b);
            let leaks = gcd > BigUint::one();
            LeakRecord { index: i + 1, gcd, leaks }
        })
        .collect())
}
