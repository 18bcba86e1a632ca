//! Finite bit sequences.
//!
//! Everything the lab measures is a bitstring: instances, programs, emitted
//! circuit descriptions, tag blocks. Bits are stored most-significant first,
//! so the textual form `"0110"` reads left to right in storage order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitsError {
    #[error("invalid bit character {0:?}")]
    BadBit(char),
    #[error("invalid hex digit {0:?}")]
    BadHex(char),
    #[error("hex payload holds {available} bits, fewer than the declared {declared}")]
    ShortHex { declared: usize, available: usize },
}

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self { bits: Vec::new() }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// All-zero string of length `n`.
    pub fn zeros(n: usize) -> Self {
        Self {
            bits: vec![false; n],
        }
    }

    /// The low `width` bits of `value`, most significant first.
    pub fn from_uint(value: u64, width: usize) -> Self {
        let bits = (0..width)
            .rev()
            .map(|i| i < 64 && (value >> i) & 1 == 1)
            .collect();
        Self { bits }
    }

    /// Minimal binary representation (leading one). Zero maps to `"0"`.
    pub fn minimal_binary(value: u64) -> Self {
        if value == 0 {
            return Self::from_bits(vec![false]);
        }
        let width = 64 - value.leading_zeros() as usize;
        Self::from_uint(value, width)
    }

    /// Interprets the bits as an unsigned integer, most significant first.
    /// Returns `None` past 64 bits.
    pub fn to_uint(&self) -> Option<u64> {
        if self.bits.len() > 64 {
            return None;
        }
        Some(self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn starts_with(&self, prefix: &BitString) -> bool {
        self.bits.starts_with(&prefix.bits)
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString::from_bits(self.bits[start..end].to_vec())
    }

    /// Hex digits, four bits per digit, zero-padded on the right.
    pub fn to_hex(&self) -> String {
        self.bits
            .chunks(4)
            .map(|chunk| {
                let nibble = (0..4).fold(0u32, |acc, i| {
                    (acc << 1) | chunk.get(i).copied().unwrap_or(false) as u32
                });
                std::char::from_digit(nibble, 16).expect("nibble < 16")
            })
            .collect()
    }

    /// Parses hex digits into `4 * digits` bits.
    pub fn from_hex(hex: &str) -> Result<Self, BitsError> {
        let mut bits = Vec::with_capacity(hex.len() * 4);
        for c in hex.chars() {
            let nibble = c.to_digit(16).ok_or(BitsError::BadHex(c))?;
            bits.extend((0..4).rev().map(|i| (nibble >> i) & 1 == 1));
        }
        Ok(Self { bits })
    }

    /// Parses a hex payload and truncates it to `len` bits.
    pub fn from_hex_with_len(hex: &str, len: usize) -> Result<Self, BitsError> {
        let mut full = Self::from_hex(hex)?;
        if full.len() < len {
            return Err(BitsError::ShortHex {
                declared: len,
                available: full.len(),
            });
        }
        full.bits.truncate(len);
        Ok(full)
    }

    /// Every string of length exactly `n`, lexicographic.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = BitString> {
        assert!(n < 64, "length {n} is not enumerable");
        (0..(1u64 << n)).map(move |v| BitString::from_uint(v, n))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = BitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(BitsError::BadBit(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString::from_bits)
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self {
            bits: iter.into_iter().collect(),
        }
    }
}

impl Serialize for BitString {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a bitstring literal; panics on bad input. Test and fixture helper.
pub fn bits(s: &str) -> BitString {
    s.parse().expect("valid bit literal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_pads_right() {
        assert_eq!(bits("101").to_hex(), "a");
        assert_eq!(bits("00001111").to_hex(), "0f");
        assert_eq!(BitString::from_hex("0f").unwrap(), bits("00001111"));
        assert_eq!(BitString::from_hex_with_len("a", 3).unwrap(), bits("101"));
        assert!(BitString::from_hex("0g").is_err());
    }

    #[test]
    fn minimal_binary_has_leading_one() {
        assert_eq!(BitString::minimal_binary(5), bits("101"));
        assert_eq!(BitString::minimal_binary(2), bits("10"));
        assert_eq!(BitString::minimal_binary(5).to_uint(), Some(5));
    }

    #[test]
    fn all_of_length_is_lexicographic() {
        let v: Vec<_> = BitString::all_of_length(2).collect();
        assert_eq!(v, vec![bits("00"), bits("01"), bits("10"), bits("11")]);
        assert_eq!(BitString::all_of_length(0).count(), 1);
    }
}
