//! Exhaustive key search over a [`KeySpace`].
//!
//! The index range is cut into contiguous chunks that are scanned
//! independently and merged by addition and set union, so every count is
//! the same for any chunking or thread count. Candidate keys are evaluated
//! in `u128` arithmetic and fall back to big integers only when an
//! intermediate product would overflow.

use std::collections::HashSet;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::keyspace::{Cursor, KeySpace, SmallKey};
use super::{AttackConfig, AttackReport, Finding};
use crate::cipher::{decrypt_value, encrypt_values, Ciphertext};
use crate::error::Result;
use crate::numeral::Plainvalue;

// Smallest chunk handed to a worker; keeps per-chunk setup negligible.
const MIN_CHUNK: u128 = 1 << 12;

/// Counts the keys in `space` that encrypt `p` to exactly `c`.
///
/// `distinct_plaintexts` is 1 when any key is consistent, since every
/// consistent key maps the same plaintext.
pub fn bruteforce_known_plaintext(p: &Plainvalue, c: &Ciphertext, space: &KeySpace, config: &AttackConfig) -> Result<AttackReport> {
    let target = Target::new(&c.values);
    let feasible = c.bit_len == p.bit_len() && c.values.len() == space.k;
    let value = p.value().clone();
    let value_small = value.to_u128();
    run(space, config, |key, index, tally| {
        if !feasible {
            return;
        }
        let hit = match (value_small, &target.small) {
            (Some(v), Some(t)) => match encrypt_matches_small(v, t, key) {
                Some(hit) => hit,
                None => encrypt_matches_big(&value, &c.values, key),
            },
            _ => encrypt_matches_big(&value, &c.values, key),
        };
        if hit {
            tally.record(index, key, Plaintext::Big(value.clone()), config.detail_limit);
        }
    })
}

/// Counts the keys in `space` under which `c` decrypts without failing any
/// integrity or range check, and the number of distinct plaintexts they yield.
pub fn ciphertext_only_ambiguity(c: &Ciphertext, space: &KeySpace, config: &AttackConfig) -> Result<AttackReport> {
    let target = Target::new(&c.values);
    let feasible = c.values.len() == space.k;
    let bit_len = c.bit_len;
    run(space, config, |key, index, tally| {
        if !feasible {
            return;
        }
        let outcome = match &target.small {
            Some(t) => match decrypt_small(t, key) {
                Small::Value(v) => Some(Plaintext::Small(v)),
                Small::Reject => None,
                Small::Overflow => decrypt_big(&c.values, key),
            },
            None => decrypt_big(&c.values, key),
        };
        if let Some(plain) = outcome.filter(|p| p.bits() <= bit_len) {
            tally.record(index, key, plain, config.detail_limit);
        }
    })
}

struct Target {
    small: Option<Vec<u128>>,
}

impl Target {
    fn new(values: &[BigUint]) -> Self {
        Target { small: values.iter().map(ToPrimitive::to_u128).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Plaintext {
    Small(u128),
    Big(BigUint),
}

impl Plaintext {
    fn normalize(self) -> Self {
        match self {
            Plaintext::Big(v) => match v.to_u128() {
                Some(s) => Plaintext::Small(s),
                None => Plaintext::Big(v),
            },
            small => small,
        }
    }

    fn bits(&self) -> u64 {
        match self {
            Plaintext::Small(v) => 128 - v.leading_zeros() as u64,
            Plaintext::Big(v) => v.bits(),
        }
    }

    fn to_big(&self) -> BigUint {
        match self {
            Plaintext::Small(v) => BigUint::from(*v),
            Plaintext::Big(v) => v.clone(),
        }
    }
}

/// `Some(matches)`, or `None` if `value · P0` does not fit in 128 bits.
fn encrypt_matches_small(value: u128, target: &[u128], key: &SmallKey) -> Option<bool> {
    let mut carry = value.checked_mul(key.p0 as u128)?;
    for (i, &t) in target.iter().enumerate() {
        let unit = key.nabla[i] as u128;
        let (q, r) = (carry / unit, carry % unit);
        match q.checked_mul(key.delta_q[i] as u128) {
            Some(c) if c == t => {}
            _ => return Some(false),
        }
        // r < 2^64 and ΔR < 2^64
        carry = r * key.delta_r[i] as u128;
    }
    Some(true)
}

fn encrypt_matches_big(value: &BigUint, target: &[BigUint], key: &SmallKey) -> bool {
    encrypt_values(value, &key.to_key()) == target
}

enum Small {
    Value(u128),
    Reject,
    Overflow,
}

fn decrypt_small(values: &[u128], key: &SmallKey) -> Small {
    let mut carried: u128 = 0;
    for i in (0..values.len()).rev() {
        let dq = key.delta_q[i] as u128;
        let dr = key.delta_r[i] as u128;
        let unit = key.nabla[i] as u128;
        if !values[i].is_multiple_of(dq) || !carried.is_multiple_of(dr) {
            return Small::Reject;
        }
        let r = carried / dr;
        if r >= unit {
            return Small::Reject;
        }
        carried = match (values[i] / dq).checked_mul(unit).and_then(|s| s.checked_add(r)) {
            Some(s) => s,
            None => return Small::Overflow,
        };
    }
    let p0 = key.p0 as u128;
    if !carried.is_multiple_of(p0) {
        return Small::Reject;
    }
    Small::Value(carried / p0)
}

fn decrypt_big(values: &[BigUint], key: &SmallKey) -> Option<Plaintext> {
    decrypt_value(values, &key.to_key()).ok().map(|v| Plaintext::Big(v).normalize())
}

#[derive(Default)]
struct Tally {
    tested: u128,
    consistent: u128,
    plaintexts: HashSet<Plaintext>,
    findings: Vec<(u128, SmallKey, Plaintext)>,
}

impl Tally {
    fn record(&mut self, index: u128, key: &SmallKey, plain: Plaintext, detail_limit: usize) {
        self.consistent += 1;
        let plain = plain.normalize();
        if self.findings.len() < detail_limit {
            self.findings.push((index, key.clone(), plain.clone()));
        }
        self.plaintexts.insert(plain);
    }

    fn merge(mut self, mut other: Tally, detail_limit: usize) -> Tally {
        self.tested += other.tested;
        self.consistent += other.consistent;
        if self.plaintexts.len() < other.plaintexts.len() {
            std::mem::swap(&mut self.plaintexts, &mut other.plaintexts);
        }
        self.plaintexts.extend(other.plaintexts);
        self.findings.append(&mut other.findings);
        self.findings.sort_unstable_by_key(|f| f.0);
        self.findings.truncate(detail_limit);
        self
    }
}

fn run<F>(space: &KeySpace, config: &AttackConfig, visit: F) -> Result<AttackReport>
where
    F: Fn(&SmallKey, u128, &mut Tally) + Sync,
{
    let start = Instant::now();
    let total = space.checked_size(config.budget)?;
    let jobs = config.jobs.max(1);
    let chunk = (total / (jobs as u128 * 16)).max(MIN_CHUNK);
    let ranges: Vec<(u128, u128)> = (0..total.div_ceil(chunk))
        .map(|i| (i * chunk, ((i + 1) * chunk).min(total)))
        .collect();

    let scan = |&(lo, hi): &(u128, u128)| {
        let mut tally = Tally::default();
        let mut cursor = Cursor::new(*space, lo);
        let mut index = lo;
        while index < hi {
            visit(cursor.key(), index, &mut tally);
            tally.tested += 1;
            index += 1;
            if index < hi && !cursor.advance() {
                break;
            }
        }
        tally
    };

    let limit = config.detail_limit;
    let tally = if jobs == 1 {
        ranges.iter().map(scan).fold(Tally::default(), |a, b| a.merge(b, limit))
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            ranges
                .par_iter()
                .map(scan)
                .reduce(Tally::default, |a, b| a.merge(b, limit))
        })
    };

    Ok(AttackReport {
        space_size: total,
        candidates_tested: tally.tested,
        consistent_keys: tally.consistent,
        distinct_plaintexts: tally.plaintexts.len() as u128,
        elapsed: start.elapsed(),
        details: tally
            .findings
            .into_iter()
            .map(|(index, key, plain)| Finding { index, key: key.to_key(), plaintext: plain.to_big() })
            .collect(),
    })
}
