//! Empirical cryptanalysis at desk scale: exhaustive key search on finite
//! key spaces, leakage from reusing a key, and ciphertext statistics.
//!
//! Nothing here asserts that the cipher is secure or insecure. Every
//! function measures, and every count it reports is exact.

mod keyspace;
mod reuse;
mod search;
mod stats;

pub use keyspace::{KeySpace, SmallKey};
pub use reuse::{reuse_leakage, LeakRecord};
pub use search::{bruteforce_known_plaintext, ciphertext_only_ambiguity};
pub use stats::{ciphertext_stats, CiphertextStats};

use std::fmt::Write as _;
use std::time::Duration;

use num_bigint::BigUint;

use crate::cipher::NablaKey;
use crate::format::key_to_string;

pub const DEFAULT_BUDGET: u128 = 100_000_000;
pub const DEFAULT_DETAIL_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttackConfig {
    /// Refuse spaces with more candidates than this.
    pub budget: u128,
    /// Worker threads; 1 scans on the calling thread.
    pub jobs: usize,
    /// Consistent keys kept in [`AttackReport::details`], lowest index first.
    pub detail_limit: usize,
}

impl Default for AttackConfig {
    fn default() -> Self {
        AttackConfig { budget: DEFAULT_BUDGET, jobs: 1, detail_limit: DEFAULT_DETAIL_LIMIT }
    }
}

/// A consistent key found during a search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    /// Position in the key space enumeration order.
    pub index: u128,
    pub key: NablaKey,
    pub plaintext: BigUint,
}

#[derive(Debug, Clone)]
pub struct AttackReport {
    pub space_size: u128,
    pub candidates_tested: u128,
    pub consistent_keys: u128,
    pub distinct_plaintexts: u128,
    pub elapsed: Duration,
    pub details: Vec<Finding>,
}

impl AttackReport {
    /// Human-readable summary, one fact per line.
    pub fn to_text(&self, title: &str) -> String {
        let mut out = format!("{title}\n");
        let _ = writeln!(out, "  key space size      {}", self.space_size);
        let _ = writeln!(out, "  candidates tested   {}", self.candidates_tested);
        let _ = writeln!(out, "  consistent keys     {}", self.consistent_keys);
        let _ = writeln!(out, "  distinct plaintexts {}", self.distinct_plaintexts);
        let _ = writeln!(out, "  elapsed             {:.3}s", self.elapsed.as_secs_f64());
        for f in &self.details {
            let key = &f.key;
            let list = |v: &[BigUint]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            let _ = writeln!(
                out,
                "  #{} nabla=[{}] dq=[{}] dr=[{}] p0={} -> {}",
                f.index,
                list(&key.nabla),
                list(&key.delta_q),
                list(&key.delta_r),
                key.p0,
                f.plaintext
            );
        }
        if (self.details.len() as u128) < self.consistent_keys {
            let _ = writeln!(out, "  ... {} more", self.consistent_keys - self.details.len() as u128);
        }
        out
    }

    /// Flat `key=value` lines for regression comparison. `elapsed_ms` is the
    /// only field that varies between runs.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "space_size={}", self.space_size);
        let _ = writeln!(out, "candidates_tested={}", self.candidates_tested);
        let _ = writeln!(out, "consistent_keys={}", self.consistent_keys);
        let _ = writeln!(out, "distinct_plaintexts={}", self.distinct_plaintexts);
        let _ = writeln!(out, "elapsed_ms={}", self.elapsed.as_millis());
        if let Some(first) = self.details.first() {
            let _ = writeln!(out, "first_consistent_index={}", first.index);
            let key = key_to_string(&first.key);
            for line in key.lines().skip(1) {
                let _ = writeln!(out, "first_consistent_{line}");
            }
        }
        out
    }
}

pub fn leakage_to_text(records: &[LeakRecord]) -> String {
    let mut out = String::from("key reuse leakage\n");
    for r in records {
        let flag = if r.leaks { "LEAK" } else { "-" };
        let _ = writeln!(out, "  [{}] gcd={} {}", r.index, r.gcd, flag);
    }
    let leaking = records.iter().filter(|r| r.leaks).count();
    let _ = writeln!(out, "  {leaking} of {} positions expose a common factor", records.len());
    out
}

pub fn leakage_to_kv(records: &[LeakRecord]) -> String {
    let mut out = format!("positions={}\n", records.len());
    for r in records {
        let _ = writeln!(out, "gcd_{}={}", r.index, r.gcd);
    }
    let _ = writeln!(out, "leaking_positions={}", records.iter().filter(|r| r.leaks).count());
    out
}
