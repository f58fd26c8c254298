use std::collections::BTreeSet;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result, Violation};
use crate::numeral::nabla_violations;

/// Secret key material: radix schedule `nabla`, quotient multipliers
/// `delta_q`, remainder multipliers `delta_r` and the pre-multiplier `p0`.
///
/// The fields are public so that arbitrary (possibly invalid) keys can be
/// built and checked with [`validate_key`]; encryption and decryption reject
/// invalid keys up front.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NablaKey {
    pub nabla: Vec<BigUint>,
    pub delta_q: Vec<BigUint>,
    pub delta_r: Vec<BigUint>,
    pub p0: BigUint,
}

impl NablaKey {
    pub fn from_u64s(nabla: &[u64], delta_q: &[u64], delta_r: &[u64], p0: u64) -> Self {
        let conv = |v: &[u64]| v.iter().map(|&x| BigUint::from(x)).collect();
        NablaKey { nabla: conv(nabla), delta_q: conv(delta_q), delta_r: conv(delta_r), p0: BigUint::from(p0) }
    }

    /// `P0 = 1`, every multiplier 1: encryption reduces to plain measurement.
    pub fn identity(nabla: Vec<BigUint>) -> Self {
        let k = nabla.len();
        NablaKey { nabla, delta_q: vec![BigUint::one(); k], delta_r: vec![BigUint::one(); k], p0: BigUint::one() }
    }

    pub fn len(&self) -> usize {
        self.nabla.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nabla.is_empty()
    }

    pub(crate) fn check(&self) -> Result<()> {
        let violations = validate_key(self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidKey(violations))
        }
    }
}

/// Lists every broken key invariant. An empty list means the key is usable.
pub fn validate_key(key: &NablaKey) -> Vec<Violation> {
    let mut out = nabla_violations(&key.nabla);
    let k = key.nabla.len();
    for (field, v) in [("deltaQ", &key.delta_q), ("deltaR", &key.delta_r)] {
        if v.len() != k {
            out.push(Violation::LengthMismatch { field, expected: k, found: v.len() });
        }
    }
    out.extend(key.delta_q.iter().enumerate().filter(|(_, d)| d.is_zero()).map(|(i, _)| Violation::ZeroDeltaQ { index: i + 1 }));
    out.extend(key.delta_r.iter().enumerate().filter(|(_, d)| d.is_zero()).map(|(i, _)| Violation::ZeroDeltaR { index: i + 1 }));
    if key.p0.is_zero() {
        out.push(Violation::ZeroP0);
    }
    out
}

// Below this many candidates, distinct nabla elements are drawn by index
// sampling instead of rejection.
const DENSE_SAMPLING_LIMIT: u64 = 1 << 20;

/// Draws a fresh key of length `k` whose entries are at most `2^magnitude_bits`.
///
/// The first `k - 1` nabla elements are distinct values from
/// `[2, 2^magnitude_bits]` in descending order; the last one is 1. All
/// multipliers and `P0` are uniform in `[1, 2^magnitude_bits]`.
pub fn keygen<R: Rng + ?Sized>(k: usize, magnitude_bits: u32, rng: &mut R) -> Result<NablaKey> {
    if k == 0 {
        return Err(Error::Parameter("key length must be at least 1".into()));
    }
    if magnitude_bits < 2 {
        return Err(Error::Parameter("magnitude_bits must be at least 2".into()));
    }
    let top = BigUint::one() << magnitude_bits;
    let candidates = &top - 1u32;
    let needed = k - 1;
    if BigUint::from(needed) > candidates {
        return Err(Error::Parameter(format!(
            "cannot draw {needed} distinct nabla elements from [2, 2^{magnitude_bits}]"
        )));
    }

    let mut prefix: Vec<BigUint> = match u64::try_from(&candidates) {
        Ok(n) if n <= DENSE_SAMPLING_LIMIT => rand::seq::index::sample(rng, n as usize, needed)
            .into_iter()
            .map(|i| BigUint::from(i as u64 + 2))
            .collect(),
        _ => {
            let lo = BigUint::from(2u32);
            let hi = &top + 1u32;
            let mut set = BTreeSet::new();
            while set.len() < needed {
                set.insert(rng.gen_biguint_range(&lo, &hi));
            }
            set.into_iter().collect()
        }
    };
    prefix.sort_unstable_by(|a, b| b.cmp(a));
    prefix.push(BigUint::one());

    let one = BigUint::one();
    let hi = &top + 1u32;
    let mut draw = || rng.gen_biguint_range(&one, &hi);
    let delta_q = (0..k).map(|_| draw()).collect();
    let delta_r = (0..k).map(|_| draw()).collect();
    let p0 = draw();
    let key = NablaKey { nabla: prefix, delta_q, delta_r, p0 };
    debug_assert!(validate_key(&key).is_empty());
    Ok(key)
}
