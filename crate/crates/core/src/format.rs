//! Text formats for keys and ciphertexts.
//!
//! Both are UTF-8, one LF-terminated line per field, decimal naturals
//! without leading zeros, single spaces between list items:
//!
//! ```text
//! NABLAKEY 1          NABLACT 1
//! k=2                 bits=3
//! p0=2                k=2
//! nabla=3 1           21
//! dq=7 5              10
//! dr=2 9
//! ```

use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::cipher::{Ciphertext, NablaKey};
use crate::decimal::{parse_canonical, to_decimal};
use crate::error::{Error, Result};

pub const KEY_MAGIC: &str = "NABLAKEY";
pub const CIPHERTEXT_MAGIC: &str = "NABLACT";
pub const FORMAT_VERSION: &str = "1";

const KEY_FIELDS: [&str; 5] = ["k", "p0", "nabla", "dq", "dr"];
const CIPHERTEXT_FIELDS: [&str; 2] = ["bits", "k"];

fn join(values: &[BigUint]) -> String {
    values.iter().map(to_decimal).collect::<Vec<_>>().join(" ")
}

pub fn key_to_string(key: &NablaKey) -> String {
    format!(
        "{KEY_MAGIC} {FORMAT_VERSION}\nk={}\np0={}\nnabla={}\ndq={}\ndr={}\n",
        key.nabla.len(),
        to_decimal(&key.p0),
        join(&key.nabla),
        join(&key.delta_q),
        join(&key.delta_r),
    )
}

pub fn ciphertext_to_string(c: &Ciphertext) -> String {
    let mut out = format!("{CIPHERTEXT_MAGIC} {FORMAT_VERSION}\nbits={}\nk={}\n", c.bit_len, c.values.len());
    for v in &c.values {
        let _ = writeln!(out, "{}", to_decimal(v));
    }
    out
}

/// Parses a key file. Only the lexical layout is checked here; pass the
/// result through [`crate::validate_key`] before use.
pub fn parse_key(text: &str) -> Result<NablaKey> {
    let lines = split_lines(text, 6)?;
    check_header(lines[0], KEY_MAGIC)?;
    let mut fields = FieldReader::new(&KEY_FIELDS);
    let k = parse_count(fields.next(2, lines[1])?, 2)?;
    let p0 = parse_natural(fields.next(3, lines[2])?, 3)?;
    let nabla = parse_list(fields.next(4, lines[3])?, 4, k)?;
    let delta_q = parse_list(fields.next(5, lines[4])?, 5, k)?;
    let delta_r = parse_list(fields.next(6, lines[5])?, 6, k)?;
    Ok(NablaKey { nabla, delta_q, delta_r, p0 })
}

pub fn parse_ciphertext(text: &str) -> Result<Ciphertext> {
    let head = split_prefix(text, 3)?;
    check_header(head[0], CIPHERTEXT_MAGIC)?;
    let mut fields = FieldReader::new(&CIPHERTEXT_FIELDS);
    let bit_len = parse_u64(fields.next(2, head[1])?, 2)?;
    let k = parse_count(fields.next(3, head[2])?, 3)?;
    let lines = split_lines(text, 3 + k)?;
    let values = lines[3..]
        .iter()
        .enumerate()
        .map(|(i, s)| parse_natural(s, 4 + i))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ciphertext { values, bit_len })
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Splits into exactly `n` LF-terminated lines.
fn split_lines(text: &str, n: usize) -> Result<Vec<&str>> {
    let body = text.strip_suffix('\n').ok_or_else(|| err(text.lines().count().max(1), "missing final line feed"))?;
    let lines: Vec<&str> = body.split('\n').collect();
    if let Some(i) = lines.iter().position(|l| l.contains('\r')) {
        return Err(err(i + 1, "carriage return in line"));
    }
    if lines.len() != n {
        return Err(err(lines.len().min(n) + 1, format!("expected {n} lines, found {}", lines.len())));
    }
    Ok(lines)
}

/// The first `n` lines, each required to be LF-terminated.
fn split_prefix(text: &str, n: usize) -> Result<Vec<&str>> {
    let mut out = Vec::with_capacity(n);
    let mut rest = text;
    for line in 1..=n {
        let (head, tail) = rest.split_once('\n').ok_or_else(|| err(line, "unexpected end of file"))?;
        if head.contains('\r') {
            return Err(err(line, "carriage return in line"));
        }
        out.push(head);
        rest = tail;
    }
    Ok(out)
}

fn check_header(line: &str, magic: &str) -> Result<()> {
    let (found, version) = line.split_once(' ').ok_or_else(|| err(1, format!("expected header `{magic} {FORMAT_VERSION}`")))?;
    if found != magic {
        return Err(err(1, format!("expected `{magic}`, found `{found}`")));
    }
    if version != FORMAT_VERSION {
        return Err(err(1, format!("unsupported version `{version}`")));
    }
    Ok(())
}

/// Hands out field values in the fixed order, telling apart unknown,
/// duplicated and out-of-order field names.
struct FieldReader<'a> {
    order: &'a [&'a str],
    pos: usize,
}

impl<'a> FieldReader<'a> {
    fn new(order: &'a [&'a str]) -> Self {
        FieldReader { order, pos: 0 }
    }

    fn next<'t>(&mut self, line: usize, text: &'t str) -> Result<&'t str> {
        let expected = self.order[self.pos];
        let (name, value) = text.split_once('=').ok_or_else(|| err(line, format!("expected `{expected}=...`")))?;
        if name != expected {
            let msg = match self.order.iter().position(|f| *f == name) {
                Some(i) if i < self.pos => format!("duplicate field `{name}`"),
                Some(_) => format!("field `{name}` out of order, expected `{expected}`"),
                None => format!("unknown field `{name}`"),
            };
            return Err(err(line, msg));
        }
        self.pos += 1;
        Ok(value)
    }
}

fn parse_natural(s: &str, line: usize) -> Result<BigUint> {
    parse_canonical(s).ok_or_else(|| err(line, format!("malformed integer `{}`", truncate(s))))
}

fn parse_u64(s: &str, line: usize) -> Result<u64> {
    let v = parse_natural(s, line)?;
    u64::try_from(&v).map_err(|_| err(line, "value too large"))
}

fn parse_count(s: &str, line: usize) -> Result<usize> {
    let v = parse_u64(s, line)?;
    match usize::try_from(v) {
        Ok(0) => Err(err(line, "k must be at least 1")),
        Ok(k) => Ok(k),
        Err(_) => Err(err(line, "value too large")),
    }
}

fn parse_list(s: &str, line: usize, k: usize) -> Result<Vec<BigUint>> {
    let values = s.split(' ').map(|t| parse_natural(t, line)).collect::<Result<Vec<_>>>()?;
    if values.len() != k {
        return Err(err(line, format!("expected {k} values, found {}", values.len())));
    }
    Ok(values)
}

fn truncate(s: &str) -> String {
    if s.len() <= 32 {
        s.to_string()
    } else {
        format!("{}...", s.chars().take(32).collect::<String>())
    }
}
