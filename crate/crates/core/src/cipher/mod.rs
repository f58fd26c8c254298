//! The keyed cipher: pre-multiply by `P0`, then measure by nabla while
//! scaling each quotient by `ΔQ_i` and each carried remainder by `ΔR_i`.
//!
//! ```text
//! S_1     = value · P0
//! c_i     = (S_i div ∇_i) · ΔQ_i
//! S_{i+1} = (S_i mod ∇_i) · ΔR_i
//! ```
//!
//! Decryption runs the recurrence backwards and checks every division is
//! exact and every recovered remainder is below its radix, so it succeeds
//! exactly when the ciphertext is the encryption of some message that fits
//! in the declared bit length.

mod key;

pub use key::{keygen, validate_key, NablaKey};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, IntegrityCheck, Result};
use crate::format;
use crate::numeral::Plainvalue;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ciphertext {
    pub values: Vec<BigUint>,
    pub bit_len: u64,
}

impl Ciphertext {
    pub fn new(values: Vec<BigUint>, bit_len: u64) -> Self {
        Ciphertext { values, bit_len }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn encrypt(p: &Plainvalue, key: &NablaKey) -> Result<Ciphertext> {
    key.check()?;
    Ok(Ciphertext { values: encrypt_values(p.value(), key), bit_len: p.bit_len() })
}

/// Encryption without the key check. The key must satisfy [`validate_key`].
pub(crate) fn encrypt_values(value: &BigUint, key: &NablaKey) -> Vec<BigUint> {
    let mut carry = value * &key.p0;
    let mut out = Vec::with_capacity(key.len());
    for ((unit, dq), dr) in key.nabla.iter().zip(&key.delta_q).zip(&key.delta_r) {
        let (q, r) = carry.div_rem(unit);
        out.push(q * dq);
        carry = r * dr;
    }
    out
}

pub fn decrypt(c: &Ciphertext, key: &NablaKey) -> Result<Plainvalue> {
    key.check()?;
    if c.values.len() != key.len() {
        return Err(Error::LengthMismatch { expected: key.len(), found: c.values.len() });
    }
    let value = decrypt_value(&c.values, key)?;
    Plainvalue::new(value, c.bit_len)
}

/// Backwards reconstruction without the key or length checks.
pub(crate) fn decrypt_value(values: &[BigUint], key: &NablaKey) -> Result<BigUint> {
    let k = key.len();
    // Carry entering position i, i.e. S_{i+1} before it is divided by ΔR_i.
    let mut carried = BigUint::zero();
    for i in (0..k).rev() {
        let (q, rem) = values[i].div_rem(&key.delta_q[i]);
        if !rem.is_zero() {
            return Err(Error::Integrity { index: i + 1, check: IntegrityCheck::DeltaQ });
        }
        let (r, rem) = carried.div_rem(&key.delta_r[i]);
        if !rem.is_zero() {
            return Err(Error::Integrity { index: i + 1, check: IntegrityCheck::DeltaR });
        }
        if r >= key.nabla[i] {
            return Err(Error::Integrity { index: i + 1, check: IntegrityCheck::Remainder });
        }
        carried = q * &key.nabla[i] + r;
    }
    let (value, rem) = carried.div_rem(&key.p0);
    if !rem.is_zero() {
        return Err(Error::Integrity { index: 0, check: IntegrityCheck::P0 });
    }
    Ok(value)
}

/// Re-encrypts a ciphertext under a second key: the canonical text form of
/// `c` is read as a byte string and encrypted like any other message.
pub fn layer(c: &Ciphertext, key: &NablaKey) -> Result<Ciphertext> {
    let bytes = format::ciphertext_to_string(c).into_bytes();
    encrypt(&Plainvalue::from_bytes(&bytes), key)
}

/// Inverse of [`layer`].
pub fn unlayer(outer: &Ciphertext, key: &NablaKey) -> Result<Ciphertext> {
    let bytes = decrypt(outer, key)?.to_bytes()?;
    let text = String::from_utf8(bytes).map_err(|e| Error::Parse { line: 0, msg: format!("inner ciphertext is not UTF-8: {e}") })?;
    format::parse_ciphertext(&text)
}
