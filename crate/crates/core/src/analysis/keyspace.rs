//! Finite key spaces and their enumeration order.
//!
//! A key index is a mixed-radix number whose digits are, from most to least
//! significant: the nabla rank, `ΔQ_1..ΔQ_k`, `ΔR_1..ΔR_k`, then `P0`.
//! Nabla prefixes are ranked in lexicographic order of their descending
//! tuples, which is colex order on the underlying element sets.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::cipher::NablaKey;
use crate::error::{Error, Result};

/// All keys of length `k` with nabla elements in `[1, nabla_max]`,
/// multipliers in `[1, delta_max]` and `P0` in `[1, p0_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KeySpace {
    pub k: usize,
    pub nabla_max: u64,
    pub delta_max: u64,
    pub p0_max: u64,
}

impl KeySpace {
    pub fn new(k: usize, nabla_max: u64, delta_max: u64, p0_max: u64) -> Result<Self> {
        if k == 0 || nabla_max == 0 || delta_max == 0 || p0_max == 0 {
            return Err(Error::Parameter("key space bounds must all be at least 1".into()));
        }
        Ok(KeySpace { k, nabla_max, delta_max, p0_max })
    }

    /// Number of admissible nabla vectors: `C(nabla_max - 1, k - 1)`.
    pub fn nabla_count(&self) -> BigUint {
        binomial_big(self.nabla_max - 1, self.k as u64 - 1)
    }

    /// Exact candidate count, computed without enumerating.
    pub fn size(&self) -> BigUint {
        self.nabla_count() * BigUint::from(self.delta_max).pow(2 * self.k as u32) * BigUint::from(self.p0_max)
    }

    /// The size as a `u128`, or `BudgetExceeded` if it is above `budget`.
    pub fn checked_size(&self, budget: u128) -> Result<u128> {
        let size = self.size();
        match size.to_u128() {
            Some(n) if n <= budget => Ok(n),
            _ => Err(Error::BudgetExceeded { size: size.to_string(), cap: budget }),
        }
    }

    pub fn contains(&self, key: &NablaKey) -> bool {
        self.index_of(key).is_some()
    }

    /// Position of `key` in the enumeration order, if the key lies in this space.
    pub fn index_of(&self, key: &NablaKey) -> Option<u128> {
        let k = self.k;
        if key.nabla.len() != k || key.delta_q.len() != k || key.delta_r.len() != k {
            return None;
        }
        let small = |v: &BigUint, max: u64| v.to_u64().filter(|&x| x >= 1 && x <= max);
        let nabla: Vec<u64> = key.nabla.iter().map(|v| small(v, self.nabla_max)).collect::<Option<_>>()?;
        if nabla[k - 1] != 1 || nabla.windows(2).any(|w| w[0] <= w[1]) {
            return None;
        }
        let rank = colex_rank(&nabla[..k - 1])?;
        let d = self.delta_max as u128;
        let mut index = rank;
        for v in key.delta_q.iter().chain(&key.delta_r) {
            index = index.checked_mul(d)?.checked_add(small(v, self.delta_max)? as u128 - 1)?;
        }
        index.checked_mul(self.p0_max as u128)?.checked_add(small(&key.p0, self.p0_max)? as u128 - 1)
    }

    /// The key at `index`. Panics if `index` is not below [`KeySpace::size`].
    pub fn key_at(&self, index: u128) -> NablaKey {
        assert!(BigUint::from(index) < self.size(), "key index {index} out of range");
        let mut cursor = Cursor::new(*self, index);
        cursor.key().to_key()
    }
}

/// A key with machine-word entries, as produced by enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallKey {
    pub nabla: Vec<u64>,
    pub delta_q: Vec<u64>,
    pub delta_r: Vec<u64>,
    pub p0: u64,
}

impl SmallKey {
    pub fn to_key(&self) -> NablaKey {
        NablaKey::from_u64s(&self.nabla, &self.delta_q, &self.delta_r, self.p0)
    }
}

/// Walks a contiguous range of key indices, updating digits in place.
pub(crate) struct Cursor {
    space: KeySpace,
    nabla_rank: u128,
    // 0-based digits: ΔQ then ΔR (row-major, first entry most significant), then P0
    deltas: Vec<u64>,
    p0: u64,
    key: SmallKey,
    nabla_count: u128,
}

impl Cursor {
    pub(crate) fn new(space: KeySpace, index: u128) -> Self {
        let k = space.k;
        let p = space.p0_max as u128;
        let d = space.delta_max as u128;
        let mut rest = index;
        let p0 = (rest % p) as u64;
        rest /= p;
        let mut deltas = vec![0u64; 2 * k];
        for slot in deltas.iter_mut().rev() {
            *slot = (rest % d) as u64;
            rest /= d;
        }
        let nabla_count = space.nabla_count().to_u128().unwrap_or(u128::MAX);
        let mut cursor = Cursor {
            space,
            nabla_rank: rest,
            deltas,
            p0,
            key: SmallKey { nabla: vec![1; k], delta_q: vec![1; k], delta_r: vec![1; k], p0: 1 },
            nabla_count,
        };
        cursor.refresh_nabla();
        for i in 0..2 * k {
            cursor.refresh_delta(i);
        }
        cursor.key.p0 = cursor.p0 + 1;
        cursor
    }

    pub(crate) fn key(&mut self) -> &SmallKey {
        &self.key
    }

    /// Moves to the next index. Returns `false` once the space is exhausted.
    pub(crate) fn advance(&mut self) -> bool {
        self.p0 += 1;
        if self.p0 < self.space.p0_max {
            self.key.p0 = self.p0 + 1;
            return true;
        }
        self.p0 = 0;
        self.key.p0 = 1;
        for i in (0..self.deltas.len()).rev() {
            self.deltas[i] += 1;
            if self.deltas[i] < self.space.delta_max {
                self.refresh_delta(i);
                return true;
            }
            self.deltas[i] = 0;
            self.refresh_delta(i);
        }
        self.nabla_rank += 1;
        if self.nabla_rank >= self.nabla_count {
            return false;
        }
        self.refresh_nabla();
        true
    }

    fn refresh_delta(&mut self, i: usize) {
        let k = self.space.k;
        let v = self.deltas[i] + 1;
        if i < k {
            self.key.delta_q[i] = v;
        } else {
            self.key.delta_r[i - k] = v;
        }
    }

    fn refresh_nabla(&mut self) {
        if self.nabla_rank < self.nabla_count {
            let prefix = colex_unrank(self.nabla_rank, self.space.k - 1);
            for (slot, v) in self.key.nabla.iter_mut().zip(prefix) {
                *slot = v;
            }
        }
    }
}

fn binomial_big(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `C(n, r)` saturating at `u128::MAX`.
fn binomial(n: u128, r: u128) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) / (i + 1) is always an integer; reduce by gcd first to delay overflow.
        let num = n - i;
        let den = i + 1;
        let g = gcd(acc, den);
        let (a, d) = (acc / g, den / g);
        let num = num / d;
        match a.checked_mul(num) {
            Some(v) => acc = v,
            None => return u128::MAX,
        }
    }
    acc
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The descending prefix of `len` nabla elements (all ≥ 2) with colex rank `rank`.
fn colex_unrank(mut rank: u128, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for i in (1..=len as u128).rev() {
        // Largest c with C(c, i) <= rank.
        let mut lo = i - 1;
        let mut hi = i;
        while binomial(hi, i) <= rank {
            hi *= 2;
        }
        while lo + 1 < hi {
            let mid = lo + (hi - lo) / 2;
            if binomial(mid, i) <= rank {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        rank -= binomial(lo, i);
        out.push(lo as u64 + 2);
    }
    out
}

fn colex_rank(prefix: &[u64]) -> Option<u128> {
    let len = prefix.len() as u128;
    let mut rank: u128 = 0;
    for (j, &v) in prefix.iter().enumerate() {
        let c = v.checked_sub(2)? as u128;
        let b = binomial(c, len - j as u128);
        if b == u128::MAX {
            return None;
        }
        rank = rank.checked_add(b)?;
    }
    Some(rank)
}
