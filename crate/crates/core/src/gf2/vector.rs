use std::fmt;
use std::ops::{Add, AddAssign};

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

const WORD: usize = 64;

/// Fixed-length vector over GF(2), packed into 64-bit words.
///
/// Bit `i` lives in word `i / 64` at bit position `i % 64`. Unused high bits
/// of the last word are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![u64::MAX; len.div_ceil(WORD)],
        };
        v.clear_tail();
        v
    }

    /// Vector with a single one at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bits<I>(bits: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<u64>,
    {
        let mut words = Vec::new();
        let mut len = 0;
        for bit in bits {
            if len % WORD == 0 {
                words.push(0);
            }
            if bit.into() & 1 == 1 {
                words[len / WORD] |= 1 << (len % WORD);
            }
            len += 1;
        }
        Self { len, words }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_bits(bits.iter().map(|&b| b as u64))
    }

    /// Low `len` bits of `mask`, bit `i` of the mask becoming entry `i`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= WORD, "mask vectors hold at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = mask;
            v.clear_tail();
        }
        v
    }

    /// Inverse of [`Gf2Vector::from_mask`]; panics when `len > 64`.
    pub fn to_mask(&self) -> u64 {
        assert!(self.len <= WORD, "vector too long for a u64 mask");
        self.words.first().copied().unwrap_or(0)
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = Self {
            len,
            words: (0..len.div_ceil(WORD)).map(|_| rng.random()).collect(),
        };
        v.clear_tail();
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        (self.words[index / WORD] >> (index % WORD)) & 1 == 1
    }

    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        let mask = 1u64 << (index % WORD);
        if value {
            self.words[index / WORD] |= mask;
        } else {
            self.words[index / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, index: usize) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        self.words[index / WORD] ^= 1 << (index % WORD);
    }

    pub fn push(&mut self, value: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, value);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Standard inner product over GF(2).
    pub fn dot(&self, other: &Self) -> bool {
        self.check_len(other);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn xor_assign(&mut self, other: &Self) {
        self.check_len(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Bitwise complement.
    pub fn negated(&self) -> Self {
        let mut v = Self {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        v.clear_tail();
        v
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// Entries `start..end` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        assert!(start <= end && end <= self.len);
        Self::from_bits((start..end).map(|i| self.get(i) as u64))
    }

    pub fn concat(parts: &[Gf2Vector]) -> Self {
        let mut out = Self::zeros(0);
        for p in parts {
            for b in p.iter() {
                out.push(b);
            }
        }
        out
    }

    /// Number of positions where the two vectors differ.
    pub fn distance(&self, other: &Self) -> usize {
        self.check_len(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    fn check_len(&self, other: &Self) {
        assert_eq!(
            self.len, other.len,
            "GF(2) vector length mismatch: {} vs {}",
            self.len, other.len
        );
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl AddAssign<&Gf2Vector> for Gf2Vector {
    fn add_assign(&mut self, rhs: &Gf2Vector) {
        self.xor_assign(rhs);
    }
}

impl Add<&Gf2Vector> for &Gf2Vector {
    type Output = Gf2Vector;

    fn add(self, rhs: &Gf2Vector) -> Gf2Vector {
        let mut out = self.clone();
        out.xor_assign(rhs);
        out
    }
}

impl Add for Gf2Vector {
    type Output = Gf2Vector;

    fn add(mut self, rhs: Gf2Vector) -> Gf2Vector {
        self.xor_assign(&rhs);
        self
    }
}

impl fmt::Display for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector({self})")
    }
}

impl std::str::FromStr for Gf2Vector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0u64),
                '1' => Ok(1u64),
                other => Err(format!("invalid bit character {other:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::from_bits)
    }
}

// Serialized as a string of '0'/'1' characters.
impl Serialize for Gf2Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Gf2Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bits_round_trip_across_word_boundary() {
        let bits: Vec<u8> = (0..130).map(|i| ((i * 7) % 3 == 0) as u8).collect();
        let v = Gf2Vector::from_bits(bits.iter().map(|&b| b as u64));
        assert_eq!(v.len(), 130);
        assert_eq!(v.to_bits(), bits);
    }

    #[test]
    fn negation_keeps_tail_clear() {
        let v = Gf2Vector::zeros(70).negated();
        assert_eq!(v.weight(), 70);
        assert_eq!(v, Gf2Vector::ones(70));
    }

    #[test]
    fn string_form() {
        let v: Gf2Vector = "10110".parse().unwrap();
        assert_eq!(v.to_string(), "10110");
        assert!(v.get(0) && !v.get(1) && v.get(3) && !v.get(4));
        assert!("10a".parse::<Gf2Vector>().is_err());
    }

    #[test]
    fn mask_conversion() {
        let v = Gf2Vector::from_mask(5, 0b10011);
        assert_eq!(v.to_string(), "11001");
        assert_eq!(v.to_mask(), 0b10011);
    }

    proptest! {
        #[test]
        fn xor_is_an_involution(a in proptest::collection::vec(any::<bool>(), 0..200), seed in any::<u64>()) {
            use rand::SeedableRng;
            let v = Gf2Vector::from_bools(&a);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let w = Gf2Vector::random(v.len(), &mut rng);
            prop_assert_eq!(&(&(&v + &w) + &w), &v);
            prop_assert!((&w + &w).is_zero());
        }
    }
}
