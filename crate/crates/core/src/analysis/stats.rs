//! Entropy, storage accounting, and character frequencies.

use std::collections::BTreeMap;

use crate::cgr::Alphabet;
use crate::error::{Error, Result};
use crate::rational::PrecisionBound;

/// Shannon entropy of the empirical character distribution, bits per
/// character.
pub fn entropy(sequence: &str) -> Result<f64> {
    let mut counts: BTreeMap<char, u64> = BTreeMap::new();
    let mut n = 0u64;
    for c in sequence.chars() {
        *counts.entry(c).or_default() += 1;
        n += 1;
    }
    if n == 0 {
        return Err(Error::UndefinedEntropy);
    }
    let h = counts
        .values()
        .map(|&c| {
            let p = c as f64 / n as f64;
            -p * p.log2()
        })
        .sum::<f64>();
    // A single-symbol sequence gives -1 * log2(1) = -0.0.
    Ok(h.max(0.0))
}

/// `ceil(log2(k))` for `k >= 1`.
pub fn ceil_log2(k: usize) -> u64 {
    (usize::BITS - k.saturating_sub(1).leading_zeros()) as u64
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StorageBits {
    pub n: usize,
    pub k: usize,
    pub precision: PrecisionBound,
    pub path_bits: u64,
    pub coordinate_bits: u64,
    pub total_bits: u64,
}

/// Path storage `n * (ceil(log2 k) + 2 ceil(log2 P))` plus coordinate
/// storage `2 ceil(log2 P)`.
pub fn storage_bits(n: usize, k: usize, precision: &PrecisionBound) -> StorageBits {
    let log_p = precision.ceil_log2();
    let path_bits = n as u64 * (ceil_log2(k) + 2 * log_p);
    let coordinate_bits = 2 * log_p;
    StorageBits {
        n,
        k,
        precision: precision.clone(),
        path_bits,
        coordinate_bits,
        total_bits: path_bits + coordinate_bits,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StorageReport {
    pub bits: StorageBits,
    /// Bits per character.
    pub entropy: f64,
    /// `ceil(n * H(S))`.
    pub entropy_bits: u64,
}

impl StorageReport {
    /// The stored representation is never smaller than the entropy bound.
    pub fn within_compression_limit(&self) -> bool {
        self.bits.total_bits >= self.entropy_bits
    }
}

/// `ceil(n * h)`, ignoring float noise below 1e-9 so exact integers such as
/// `4 * 2.0` do not round up.
pub fn entropy_floor_bits(n: usize, h: f64) -> u64 {
    let v = n as f64 * h;
    (v - 1e-9).ceil().max(0.0) as u64
}

pub fn storage_report(sequence: &str, alphabet: &Alphabet, precision: &PrecisionBound) -> Result<StorageReport> {
    let n = sequence.chars().count();
    let h = entropy(sequence)?;
    Ok(StorageReport {
        bits: storage_bits(n, alphabet.len(), precision),
        entropy: h,
        entropy_bits: entropy_floor_bits(n, h),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharDistribution {
    /// `(symbol, count, frequency)` in alphabet order.
    pub entries: Vec<(char, u64, f64)>,
    /// Characters outside the alphabet.
    pub other: u64,
    pub total: u64,
}

impl CharDistribution {
    pub fn frequency(&self, symbol: char) -> Option<f64> {
        self.entries.iter().find(|e| e.0 == symbol).map(|e| e.2)
    }

    pub fn count(&self, symbol: char) -> Option<u64> {
        self.entries.iter().find(|e| e.0 == symbol).map(|e| e.1)
    }
}

pub fn char_distribution(sequence: &str, alphabet: &Alphabet) -> CharDistribution {
    let mut counts = vec![0u64; alphabet.len()];
    let mut other = 0;
    let mut total = 0;
    for c in sequence.chars() {
        total += 1;
        match alphabet.index(c) {
            Some(i) => counts[i - 1] += 1,
            None => other += 1,
        }
    }
    let entries = alphabet
        .symbols()
        .iter()
        .zip(counts)
        .map(|(&s, c)| (s, c, if total == 0 { 0.0 } else { c as f64 / total as f64 }))
        .collect();
    CharDistribution { entries, other, total }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy("AAAA").unwrap(), 0.0);
        assert_eq!(entropy("ATGC").unwrap(), 2.0);
        assert!((entropy("AAAT").unwrap() - 0.811_278_124_459_132_8).abs() < 1e-15);
        assert!(matches!(entropy(""), Err(Error::UndefinedEntropy)));
    }

    #[test]
    fn storage_examples() {
        let p16 = PrecisionBound::new(16).unwrap();
        assert_eq!(storage_bits(0, 4, &p16).total_bits, 8);
        let ten = storage_bits(10, 4, &p16);
        assert_eq!((ten.path_bits, ten.total_bits), (100, 108));
        let big = storage_bits(24, 4, &PrecisionBound::default());
        assert_eq!((big.path_bits, big.coordinate_bits, big.total_bits), (1584, 64, 1648));
        assert_eq!(storage_bits(1, 20, &p16).path_bits, 5 + 8);
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!([1, 2, 3, 4, 5, 20, 64, 65].map(ceil_log2), [0, 1, 2, 2, 3, 5, 6, 7]);
    }

    #[test]
    fn distribution_examples() {
        let dna = Alphabet::dna();
        let d = char_distribution("ATGC", &dna);
        assert!(d.entries.iter().all(|e| e.2 == 0.25));
        let d = char_distribution("", &dna);
        assert!(d.entries.iter().all(|e| e.1 == 0 && e.2 == 0.0));
        let d = char_distribution("AATT", &dna);
        assert_eq!(
            [d.frequency('A'), d.frequency('T'), d.frequency('G'), d.frequency('C')],
            [Some(0.5), Some(0.5), Some(0.0), Some(0.0)]
        );
        let d = char_distribution("AXN", &dna);
        assert_eq!((d.count('A'), d.other, d.total), (Some(1), 2, 3));
    }

    #[test]
    fn report_for_uniform_sequence() {
        let rep = storage_report("ATGC", &Alphabet::dna(), &PrecisionBound::new(16).unwrap()).unwrap();
        assert_eq!(rep.entropy_bits, 8);
        assert!(rep.within_compression_limit());
    }

    proptest! {
        #[test]
        fn entropy_bounded_by_alphabet(seq in "[ATGC]{1,300}") {
            let h = entropy(&seq).unwrap();
            prop_assert!((0.0..=2.0 + 1e-12).contains(&h));
            let rep = storage_report(&seq, &Alphabet::dna(), &PrecisionBound::new(16).unwrap()).unwrap();
            prop_assert!(rep.within_compression_limit());
        }
    }
}
