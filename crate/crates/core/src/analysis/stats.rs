use std::fmt::Write as _;

use crate::cipher::Ciphertext;
use crate::format::ciphertext_to_string;
use crate::numeral::Plainvalue;

#[derive(Debug, Clone, PartialEq)]
pub struct CiphertextStats {
    pub value_bits: Vec<u64>,
    pub total_value_bits: u64,
    pub plaintext_bits: u64,
    /// `total_value_bits / plaintext_bits`; `None` for an empty plaintext.
    pub expansion_ratio: Option<f64>,
    pub serialized_len: usize,
    /// Pearson statistic of the serialized bytes against a uniform
    /// distribution over 256 values (255 degrees of freedom).
    pub chi_square: f64,
}

pub fn ciphertext_stats(c: &Ciphertext, p: &Plainvalue) -> CiphertextStats {
    let value_bits: Vec<u64> = c.values.iter().map(|v| v.bits()).collect();
    let total_value_bits = value_bits.iter().sum();
    let plaintext_bits = p.bit_len();
    let expansion_ratio = (plaintext_bits > 0).then(|| total_value_bits as f64 / plaintext_bits as f64);
    let serialized = ciphertext_to_string(c);
    CiphertextStats {
        value_bits,
        total_value_bits,
        plaintext_bits,
        expansion_ratio,
        serialized_len: serialized.len(),
        chi_square: byte_chi_square(serialized.as_bytes()),
    }
}

pub(crate) fn byte_chi_square(bytes: &[u8]) -> f64 {
    if bytes.is_empty() {
        return 0.0;
    }
    let mut counts = [0u64; 256];
    for &b in bytes {
        counts[b as usize] += 1;
    }
    let expected = bytes.len() as f64 / 256.0;
    counts.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum()
}

impl CiphertextStats {
    pub fn to_text(&self) -> String {
        let mut out = String::from("ciphertext statistics\n");
        let _ = writeln!(out, "  plaintext bits      {}", self.plaintext_bits);
        let _ = writeln!(out, "  value bits          {} ({:?})", self.total_value_bits, self.value_bits);
        match self.expansion_ratio {
            Some(r) => {
                let _ = writeln!(out, "  expansion ratio     {r:.6}");
            }
            None => {
                let _ = writeln!(out, "  expansion ratio     undefined (empty plaintext)");
            }
        }
        let _ = writeln!(out, "  serialized bytes    {}", self.serialized_len);
        let _ = writeln!(out, "  byte chi-square     {:.3} (255 dof)", self.chi_square);
        out
    }

    pub fn to_kv(&self) -> String {
        let ratio = self.expansion_ratio.map_or_else(|| "undefined".to_string(), |r| r.to_string());
        let bits = self.value_bits.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        format!(
            "plaintext_bits={}\ntotal_value_bits={}\nvalue_bits={}\nexpansion_ratio={}\nserialized_len={}\nchi_square={}\n",
            self.plaintext_bits, self.total_value_bits, bits, ratio, self.serialized_len, self.chi_square
        )
    }
}
