//! Regression values for the analysis harness, each checked against an
//! independent nested-loop oracle that knows nothing about cursors, ranks
//! or the decryption routine.

use std::collections::BTreeSet;

use nabla_core::analysis::{
    bruteforce_known_plaintext, ciphertext_only_ambiguity, ciphertext_stats, reuse_leakage, AttackConfig, KeySpace,
};
use nabla_core::{encrypt, keygen, Ciphertext, NablaKey, Plainvalue};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

const TOY: (usize, u64, u64, u64) = (2, 8, 4, 4);
const TOY_PLAINTEXT: u64 = 0xA7;

fn toy_space() -> KeySpace {
    KeySpace::new(TOY.0, TOY.1, TOY.2, TOY.3).unwrap()
}

fn toy_key() -> NablaKey {
    NablaKey::from_u64s(&[5, 1], &[3, 2], &[4, 1], 3)
}

fn toy_plain() -> Plainvalue {
    Plainvalue::from_bytes(&[TOY_PLAINTEXT as u8])
}

fn toy_ciphertext() -> Ciphertext {
    encrypt(&toy_plain(), &toy_key()).unwrap()
}

// Straight transcription of the recurrence for k = 2.
fn oracle_encrypt(v: u64, nabla0: u64, dq: [u64; 2], dr: [u64; 2], p0: u64) -> [u64; 2] {
    let s1 = v * p0;
    let c1 = (s1 / nabla0) * dq[0];
    let s2 = (s1 % nabla0) * dr[0];
    let c2 = s2 * dq[1];
    let _ = dr[1];
    [c1, c2]
}

struct OracleCounts {
    known_plaintext_keys: u64,
    ambiguous_keys: u64,
    plaintexts: BTreeSet<u64>,
    first_known_plaintext_key: Option<(u64, [u64; 2], [u64; 2], u64)>,
}

// Enumerates (nabla0, dq1, dq2, dr1, dr2, p0) in the documented order and,
// for each key, every 8-bit plaintext.
fn oracle(c: [u64; 2], known: u64) -> OracleCounts {
    let mut out = OracleCounts { known_plaintext_keys: 0, ambiguous_keys: 0, plaintexts: BTreeSet::new(), first_known_plaintext_key: None };
    for nabla0 in 2..=TOY.1 {
        for dq1 in 1..=TOY.2 {
            for dq2 in 1..=TOY.2 {
                for dr1 in 1..=TOY.2 {
                    for dr2 in 1..=TOY.2 {
                        for p0 in 1..=TOY.3 {
                            let (dq, dr) = ([dq1, dq2], [dr1, dr2]);
                            if oracle_encrypt(known, nabla0, dq, dr, p0) == c {
                                out.known_plaintext_keys += 1;
                                out.first_known_plaintext_key.get_or_insert((nabla0, dq, dr, p0));
                            }
                            let hits: Vec<u64> = (0..256).filter(|&v| oracle_encrypt(v, nabla0, dq, dr, p0) == c).collect();
                            if !hits.is_empty() {
                                out.ambiguous_keys += 1;
                                out.plaintexts.extend(hits);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn toy_c() -> [u64; 2] {
    let c = toy_ciphertext();
    [c.values[0].to_u64().unwrap(), c.values[1].to_u64().unwrap()]
}

#[test]
fn toy_ciphertext_trace() {
    // S1 = 167·3 = 501, q1 = 100, c1 = 300, S2 = (501 mod 5)·4 = 4, c2 = 8
    assert_eq!(toy_c(), [300, 8]);
    assert_eq!(oracle_encrypt(167, 5, [3, 2], [4, 1], 3), [300, 8]);
}

#[test]
fn known_plaintext_counts_match_oracle() {
    let expected = oracle(toy_c(), TOY_PLAINTEXT);
    let space = toy_space();
    let cfg = AttackConfig { detail_limit: 10_000, ..AttackConfig::default() };
    let report = bruteforce_known_plaintext(&toy_plain(), &toy_ciphertext(), &space, &cfg).unwrap();
    assert_eq!(report.space_size, 7168);
    assert_eq!(report.candidates_tested, 7168);
    assert_eq!(report.consistent_keys as u64, expected.known_plaintext_keys);
    assert_eq!(report.consistent_keys, 8, "pinned regression count");
    assert_eq!(report.distinct_plaintexts, 1);

    let (n0, dq, dr, p0) = expected.first_known_plaintext_key.unwrap();
    let first = &report.details[0];
    assert_eq!(first.key, NablaKey::from_u64s(&[n0, 1], &dq, &dr, p0));

    let true_index = space.index_of(&toy_key()).unwrap();
    assert!(report.details.iter().any(|f| f.index == true_index));
    for f in &report.details {
        assert_eq!(encrypt(&toy_plain(), &f.key).unwrap(), toy_ciphertext());
    }
}

#[test]
fn tampered_ciphertext_excludes_true_key() {
    let mut c = toy_ciphertext();
    c.values[0] += 1u32;
    let tampered = [301, 8];
    let expected = oracle(tampered, TOY_PLAINTEXT);
    let space = toy_space();
    let cfg = AttackConfig { detail_limit: 10_000, ..AttackConfig::default() };
    let report = bruteforce_known_plaintext(&toy_plain(), &c, &space, &cfg).unwrap();
    assert_eq!(report.consistent_keys as u64, expected.known_plaintext_keys);
    let true_index = space.index_of(&toy_key()).unwrap();
    assert!(report.details.iter().all(|f| f.index != true_index));
}

#[test]
fn ambiguity_counts_match_oracle() {
    let expected = oracle(toy_c(), TOY_PLAINTEXT);
    let cfg = AttackConfig { detail_limit: 10_000, ..AttackConfig::default() };
    let report = ciphertext_only_ambiguity(&toy_ciphertext(), &toy_space(), &cfg).unwrap();
    assert_eq!(report.consistent_keys as u64, expected.ambiguous_keys);
    assert_eq!(report.distinct_plaintexts as usize, expected.plaintexts.len());
    let found: BTreeSet<u64> = report.details.iter().map(|f| f.plaintext.to_u64().unwrap()).collect();
    assert_eq!(found, expected.plaintexts);
    assert_eq!((report.consistent_keys, report.distinct_plaintexts), (280, 16), "pinned regression counts");
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let space = KeySpace::new(3, 9, 3, 5).unwrap();
    let key = NablaKey::from_u64s(&[7, 4, 1], &[2, 3, 1], &[3, 1, 2], 5);
    let p = Plainvalue::from_bytes(&[0x5c, 0x01]);
    let c = encrypt(&p, &key).unwrap();
    let run = |jobs| {
        let cfg = AttackConfig { jobs, detail_limit: 50, ..AttackConfig::default() };
        let a = ciphertext_only_ambiguity(&c, &space, &cfg).unwrap();
        let b = bruteforce_known_plaintext(&p, &c, &space, &cfg).unwrap();
        (a.consistent_keys, a.distinct_plaintexts, a.details, b.consistent_keys, b.details)
    };
    let single = run(1);
    assert!(single.0 >= 1 && single.3 >= 1);
    for jobs in [2, 3, 8] {
        assert_eq!(run(jobs), single, "jobs = {jobs}");
    }
}

#[test]
fn singleton_space_holds_only_true_key() {
    let key = NablaKey::from_u64s(&[2, 1], &[1, 1], &[1, 1], 1);
    let space = KeySpace::new(2, 2, 1, 1).unwrap();
    assert_eq!(space.checked_size(u128::MAX).unwrap(), 1);
    let p = Plainvalue::from_bytes(&[9]);
    let c = encrypt(&p, &key).unwrap();
    let report = ciphertext_only_ambiguity(&c, &space, &AttackConfig::default()).unwrap();
    assert_eq!(report.consistent_keys, 1);
    assert_eq!(report.distinct_plaintexts, 1);
}

#[test]
fn budget_is_enforced() {
    let cfg = AttackConfig { budget: 7000, ..AttackConfig::default() };
    let err = ciphertext_only_ambiguity(&toy_ciphertext(), &toy_space(), &cfg).unwrap_err();
    assert!(matches!(err, nabla_core::Error::BudgetExceeded { cap: 7000, .. }));
}

#[test]
fn random_keys_inside_space_are_always_found() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let space = KeySpace::new(3, 10, 3, 3).unwrap();
    let total = space.checked_size(u128::MAX).unwrap();
    for _ in 0..20 {
        let key = space.key_at(rng.gen_range(0..total));
        let p = Plainvalue::from_bytes(&[rng.gen()]);
        let c = encrypt(&p, &key).unwrap();
        let cfg = AttackConfig { detail_limit: usize::MAX, ..AttackConfig::default() };
        let r = bruteforce_known_plaintext(&p, &c, &space, &cfg).unwrap();
        assert!(r.details.iter().any(|f| f.key == key));
        let r = ciphertext_only_ambiguity(&c, &space, &cfg).unwrap();
        assert!(r.details.iter().any(|f| f.key == key && &f.plaintext == p.value()));
    }
}

#[test]
fn reuse_gcd_is_multiple_of_delta_q() {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let k = rng.gen_range(1..=8);
        let key = keygen(k, 32, &mut rng).unwrap();
        let mut bytes = vec![0u8; rng.gen_range(0..64)];
        rng.fill_bytes(&mut bytes);
        let c1 = encrypt(&Plainvalue::from_bytes(&bytes), &key).unwrap();
        rng.fill_bytes(&mut bytes);
        let c2 = encrypt(&Plainvalue::from_bytes(&bytes), &key).unwrap();
        for (rec, dq) in reuse_leakage(&c1, &c2).unwrap().iter().zip(&key.delta_q) {
            assert!(rec.gcd.is_multiple_of(dq) || rec.gcd.is_zero() && dq.is_zero());
        }
    }
}

#[test]
fn mean_expansion_regression() {
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    let mut sum = 0.0;
    for _ in 0..100 {
        let key = keygen(4, 32, &mut rng).unwrap();
        let mut bytes = vec![0u8; 1024];
        rng.fill_bytes(&mut bytes);
        let p = Plainvalue::from_bytes(&bytes);
        let stats = ciphertext_stats(&encrypt(&p, &key).unwrap(), &p);
        sum += stats.expansion_ratio.unwrap();
    }
    let mean = sum / 100.0;
    println!("mean expansion ratio = {mean:.9}");
    assert!((mean - MEAN_EXPANSION).abs() < 1e-12, "mean = {mean}");
}

const MEAN_EXPANSION: f64 = 1.02943359375;

#[test]
fn stats_value_bits_are_exact() {
    let c = Ciphertext::new(vec![BigUint::from(21u32), BigUint::zero(), BigUint::from(1u32) << 100u32], 64);
    let s = ciphertext_stats(&c, &Plainvalue::new(BigUint::zero(), 64).unwrap());
    assert_eq!(s.value_bits, vec![5, 0, 101]);
    assert_eq!(s.expansion_ratio, Some(106.0 / 64.0));
}
