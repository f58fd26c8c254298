//! Bit-sequence/integer codec and the plain measure-by-nabla decomposition.
//!
//! Bits are read in written order with the leftmost bit carrying exponent 0,
//! so `"101000001"` is `2^0 + 2^2 + 2^8 = 261`. A [`Plainvalue`] keeps the
//! declared bit length next to the integer because the integer alone loses
//! trailing zero bits.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result, Violation};

/// An ordered sequence of binary digits. Position 0 is the leftmost written bit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BitSequence {
    bits: Vec<bool>,
}

impl BitSequence {
    pub fn new(bits: Vec<bool>) -> Self {
        BitSequence { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

impl FromStr for BitSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .bytes()
            .enumerate()
            .map(|(i, b)| match b {
                b'0' => Ok(false),
                b'1' => Ok(true),
                _ => Err(Error::Parse { line: 1, msg: format!("invalid bit {:?} at offset {i}", b as char) }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BitSequence { bits })
    }
}

impl fmt::Display for BitSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A natural number together with the bit length of the message it encodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Plainvalue {
    value: BigUint,
    bit_len: u64,
}

impl Plainvalue {
    /// Fails with [`Error::Range`] unless `value < 2^bit_len`.
    pub fn new(value: BigUint, bit_len: u64) -> Result<Self> {
        if value.bits() > bit_len {
            return Err(Error::Range { bit_len });
        }
        Ok(Plainvalue { value, bit_len })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn bit_len(&self) -> u64 {
        self.bit_len
    }

    pub fn into_value(self) -> BigUint {
        self.value
    }

    /// Little-endian base-256 reading of a byte string: bit `b` of byte `i`
    /// sits at position `8i + b`.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        Plainvalue {
            value: BigUint::from_bytes_le(bytes),
            bit_len: 8 * bytes.len() as u64,
        }
    }

    /// Inverse of [`Plainvalue::from_bytes`]; the output has exactly `bit_len / 8` bytes.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        if !self.bit_len.is_multiple_of(8) {
            return Err(Error::NotByteAligned(self.bit_len));
        }
        let n = usize::try_from(self.bit_len / 8).map_err(|_| Error::Range { bit_len: self.bit_len })?;
        if n == 0 {
            return Ok(Vec::new());
        }
        let mut out = self.value.to_bytes_le();
        out.resize(n, 0);
        Ok(out)
    }
}

/// Maps a bit sequence to its integer value, keeping the sequence length.
pub fn int_from_bits(seq: &BitSequence) -> Plainvalue {
    let mut value = BigUint::zero();
    for (pos, _) in seq.bits.iter().enumerate().filter(|(_, &b)| b) {
        value.set_bit(pos as u64, true);
    }
    Plainvalue { value, bit_len: seq.len() as u64 }
}

/// Inverse of [`int_from_bits`]. Trailing zero bits up to `bit_len` are restored.
pub fn bits_from_int(p: &Plainvalue) -> Result<BitSequence> {
    if p.value.bits() > p.bit_len {
        return Err(Error::Range { bit_len: p.bit_len });
    }
    let bits = (0..p.bit_len).map(|pos| p.value.bit(pos)).collect();
    Ok(BitSequence { bits })
}

/// A radix schedule: strictly decreasing positive integers ending in 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Nabla {
    elems: Vec<BigUint>,
}

impl Nabla {
    pub fn new(elems: Vec<BigUint>) -> Result<Self> {
        let violations = nabla_violations(&elems);
        if violations.is_empty() {
            Ok(Nabla { elems })
        } else {
            Err(Error::InvalidNabla(violations))
        }
    }

    pub fn from_u64s(elems: &[u64]) -> Result<Self> {
        Self::new(elems.iter().map(|&e| BigUint::from(e)).collect())
    }

    pub fn elems(&self) -> &[BigUint] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
}

pub(crate) fn nabla_violations(elems: &[BigUint]) -> Vec<Violation> {
    let mut out = Vec::new();
    if elems.is_empty() {
        out.push(Violation::EmptyNabla);
        return out;
    }
    for (i, w) in elems.windows(2).enumerate() {
        if w[0] <= w[1] {
            out.push(Violation::NablaNotDecreasing { index: i + 1 });
        }
    }
    if !elems[elems.len() - 1].is_one() {
        out.push(Violation::NablaLastNotOne);
    }
    out
}

/// Quotients produced by [`measure`], one per nabla element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Measure {
    quotients: Vec<BigUint>,
}

impl Measure {
    pub fn new(quotients: Vec<BigUint>) -> Self {
        Measure { quotients }
    }

    pub fn quotients(&self) -> &[BigUint] {
        &self.quotients
    }

    pub fn into_quotients(self) -> Vec<BigUint> {
        self.quotients
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }
}

/// Divides `value` by each nabla element in turn, carrying the remainder.
pub fn measure(value: &BigUint, nabla: &Nabla) -> Measure {
    let mut rest = value.clone();
    let quotients = nabla
        .elems
        .iter()
        .map(|unit| {
            let (q, r) = rest.div_rem(unit);
            rest = r;
            q
        })
        .collect();
    debug_assert!(rest.is_zero());
    Measure { quotients }
}

/// `Σ q_i · ∇_i`, the inverse of [`measure`].
pub fn recompose(m: &Measure, nabla: &Nabla) -> Result<BigUint> {
    if m.len() != nabla.len() {
        return Err(Error::LengthMismatch { expected: nabla.len(), found: m.len() });
    }
    Ok(m.quotients.iter().zip(&nabla.elems).map(|(q, unit)| q * unit).sum())
}
