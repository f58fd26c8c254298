//! A mixed-radix cipher built on "measurement by nabla".
//!
//! A message is read as a natural number and decomposed against a strictly
//! decreasing radix schedule ending in 1 (the nabla). The keyed variant
//! pre-multiplies the value and scales each quotient and carried remainder
//! by secret multipliers. The crate also ships the text formats for keys
//! and ciphertexts and an exhaustive-search harness for studying the
//! cipher on small key spaces.
//!
//! This is a study object. It provides no authentication and makes no claim
//! of real-world security.

pub mod analysis;
pub mod cipher;
pub mod decimal;
pub mod error;
pub mod format;
pub mod numeral;

pub use cipher::{decrypt, encrypt, keygen, layer, unlayer, validate_key, Ciphertext, NablaKey};
pub use error::{Error, IntegrityCheck, Result, Violation};
pub use numeral::{bits_from_int, int_from_bits, measure, recompose, BitSequence, Measure, Nabla, Plainvalue};
