//! Decimal conversion for large naturals.
//!
//! `BigUint::from_str_radix` is quadratic in the digit count, which takes
//! seconds for megabyte-sized ciphertexts. Parsing here splits the digit
//! string in halves and recombines with `high * 10^m + low`, so the cost is
//! dominated by the multiplication algorithm instead.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Num;

const LEAF_DIGITS: usize = 2048;

/// Parses a canonical decimal natural: ASCII digits only, no sign, no
/// leading zeros (except `"0"` itself). Returns `None` on any deviation.
pub fn parse_canonical(s: &str) -> Option<BigUint> {
    let bytes = s.as_bytes();
    if bytes.is_empty() || !bytes.iter().all(u8::is_ascii_digit) {
        return None;
    }
    if bytes.len() > 1 && bytes[0] == b'0' {
        return None;
    }
    Some(parse_digits(bytes))
}

/// Parses a non-empty run of ASCII digits. Leading zeros are accepted.
pub(crate) fn parse_digits(digits: &[u8]) -> BigUint {
    let mut powers = HashMap::new();
    parse_rec(digits, &mut powers)
}

fn parse_rec(digits: &[u8], powers: &mut HashMap<usize, BigUint>) -> BigUint {
    if digits.len() <= LEAF_DIGITS {
        // ASCII digits checked by the caller.
        let s = std::str::from_utf8(digits).expect("ascii digits");
        return BigUint::from_str_radix(s, 10).expect("ascii digits");
    }
    let low_len = digits.len() / 2;
    let (hi, lo) = digits.split_at(digits.len() - low_len);
    let high = parse_rec(hi, powers);
    let low = parse_rec(lo, powers);
    let scale = powers
        .entry(low_len)
        .or_insert_with(|| BigUint::from(10u32).pow(low_len as u32));
    high * &*scale + low
}

/// Canonical decimal rendering.
pub fn to_decimal(v: &BigUint) -> String {
    v.to_str_radix(10)
}
