use std::fmt;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A vector with entries in {0, 1}. Serializes as a bitstring such as
/// `"1011"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryVector(Vec<bool>);

impl BinaryVector {
    pub fn zeros(len: usize) -> Self {
        BinaryVector(vec![false; len])
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        BinaryVector(bits)
    }

    /// Builds from 0/1 integers; any other value is rejected.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        bits.iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::InvalidArgument(format!(
                    "binary entry must be 0 or 1, got {other}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BinaryVector)
    }

    /// Parses strings like `1,0,1,1` or `1011`.
    pub fn parse(text: &str) -> Result<Self> {
        let digits: Vec<u8> = text
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidArgument(format!(
                    "unexpected character {other:?} in binary vector"
                ))),
            })
            .collect::<Result<_>>()?;
        Self::from_bits(&digits)
    }

    /// Uniformly random bits.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        BinaryVector((0..len).map(|_| rng.random::<bool>()).collect())
    }

    /// Length-`len` vector with ones at the given positions.
    pub fn from_index_set(len: usize, ones: &[usize]) -> Self {
        let mut bits = vec![false; len];
        for &i in ones {
            bits[i] = true;
        }
        BinaryVector(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.0[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = !self.0[i];
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn complement(&self) -> Self {
        BinaryVector(self.0.iter().map(|b| !b).collect())
    }

    /// Number of positions where both vectors are 1.
    pub fn intersection(&self, other: &Self) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| **a && **b)
            .count()
    }

    pub fn hamming(&self, other: &Self) -> usize {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
    }

    /// ±1 encoding: 1 ↦ +1, 0 ↦ −1.
    pub fn to_signed(&self) -> Vec<f64> {
        self.0.iter().map(|&b| if b { 1.0 } else { -1.0 }).collect()
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for BinaryVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BinaryVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Self::parse(&text).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for BinaryVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl FromIterator<bool> for BinaryVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BinaryVector(iter.into_iter().collect())
    }
}
