//! Bit-packed vectors over GF(2).

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

const WORD_BITS: usize = 64;

/// Dense vector over GF(2), packed into `u64` words.
///
/// Bit `i` of the vector lives at bit `i % 64` of word `i / 64`. Bits at
/// positions `>= len` are kept zero; every mutating method restores that
/// invariant before returning.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    /// All-zero vector of length `len`.
    #[must_use]
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(WORD_BITS)],
            len,
        }
    }

    /// Vector with a single one at `pos`.
    ///
    /// # Panics
    /// Panics if `pos >= len`.
    #[must_use]
    pub fn singleton(len: usize, pos: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(pos, true);
        v
    }

    /// Builds a vector from boolean entries.
    #[must_use]
    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a `0`/`1` string, index 0 first.
    pub fn parse(s: &str) -> Result<Self, String> {
        let mut v = Self::zeros(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => v.set(i, true),
                _ => return Err(format!("invalid bit character {ch:?}")),
            }
        }
        Ok(v)
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.len
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// # Panics
    /// Panics if `pos >= len`.
    #[must_use]
    pub fn get(&self, pos: usize) -> bool {
        assert!(pos < self.len, "bit index {pos} out of range {}", self.len);
        self.words[pos / WORD_BITS] >> (pos % WORD_BITS) & 1 != 0
    }

    /// # Panics
    /// Panics if `pos >= len`.
    pub fn set(&mut self, pos: usize, value: bool) {
        assert!(pos < self.len, "bit index {pos} out of range {}", self.len);
        let mask = 1u64 << (pos % WORD_BITS);
        if value {
            self.words[pos / WORD_BITS] |= mask;
        } else {
            self.words[pos / WORD_BITS] &= !mask;
        }
    }

    /// # Panics
    /// Panics if `pos >= len`.
    pub fn flip(&mut self, pos: usize) {
        assert!(pos < self.len, "bit index {pos} out of range {}", self.len);
        self.words[pos / WORD_BITS] ^= 1u64 << (pos % WORD_BITS);
    }

    /// Adds `other` into `self` over GF(2).
    ///
    /// # Panics
    /// Panics on length mismatch.
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    #[must_use]
    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Bitwise AND, used for support intersections.
    ///
    /// # Panics
    /// Panics on length mismatch.
    #[must_use]
    pub fn and(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len, "length mismatch in and");
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
        out
    }

    /// Standard dot product over GF(2): parity of the overlap.
    ///
    /// # Panics
    /// Panics on length mismatch.
    #[must_use]
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            != 0
    }

    #[must_use]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Position of the first set bit, if any.
    #[must_use]
    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Iterator over the positions of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rem = w;
            std::iter::from_fn(move || {
                if rem == 0 {
                    None
                } else {
                    let b = rem.trailing_zeros() as usize;
                    rem &= rem - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }

    /// Interprets the vector as a basis-state index with bit 0 most
    /// significant, matching the amplitude ordering of state vectors.
    ///
    /// # Panics
    /// Panics if `len > 63`.
    #[must_use]
    pub fn to_basis_index(&self) -> usize {
        assert!(self.len < 64, "vector too long for a basis index");
        let mut idx = 0usize;
        for i in 0..self.len {
            idx = idx << 1 | usize::from(self.get(i));
        }
        idx
    }

    /// Inverse of [`to_basis_index`](Self::to_basis_index).
    ///
    /// # Panics
    /// Panics if `len > 63` or the index needs more than `len` bits.
    #[must_use]
    pub fn from_basis_index(len: usize, idx: usize) -> Self {
        assert!(len < 64, "vector too long for a basis index");
        assert!(
            idx < 1usize << len,
            "index {idx} out of range for {len} bits"
        );
        let mut v = Self::zeros(len);
        for i in 0..len {
            if idx >> (len - 1 - i) & 1 != 0 {
                v.set(i, true);
            }
        }
        v
    }

    /// Little-endian integer encoding: bit i contributes 2^i. Used for
    /// exponent-vector indexing; distinct from [`to_basis_index`](Self::to_basis_index),
    /// which puts bit 0 at the top.
    ///
    /// # Panics
    /// Panics if `len > 63`.
    #[must_use]
    pub fn to_index_le(&self) -> u64 {
        assert!(self.len < 64, "vector too long for an index");
        self.ones().fold(0u64, |acc, i| acc | 1 << i)
    }

    /// Concatenation, used when adjoining ancilla blocks.
    #[must_use]
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = Self::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// The slice `[lo, hi)` as a new vector.
    ///
    /// # Panics
    /// Panics if `lo > hi` or `hi > len`.
    #[must_use]
    pub fn slice(&self, lo: usize, hi: usize) -> BitVec {
        assert!(lo <= hi && hi <= self.len, "bad slice bounds");
        let mut out = Self::zeros(hi - lo);
        for i in lo..hi {
            if self.get(i) {
                out.set(i - lo, true);
            }
        }
        out
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        BitVec::parse(&s).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_flip() {
        let mut v = BitVec::zeros(70);
        assert!(v.is_zero());
        v.set(0, true);
        v.set(69, true);
        assert!(v.get(0) && v.get(69) && !v.get(35));
        v.flip(69);
        assert!(!v.get(69));
        assert_eq!(v.count_ones(), 1);
    }

    #[test]
    fn xor_and_dot() {
        let a = BitVec::parse("1101").unwrap();
        let b = BitVec::parse("0111").unwrap();
        assert_eq!(a.xor(&b).to_string(), "1010");
        assert_eq!(a.and(&b).to_string(), "0101");
        // overlap has two ones, parity zero
        assert!(!a.dot(&b));
        assert!(a.dot(&BitVec::parse("1000").unwrap()));
    }

    #[test]
    fn ones_iterator_matches_gets() {
        let v = BitVec::parse("10100110").unwrap();
        let ones: Vec<usize> = v.ones().collect();
        assert_eq!(ones, vec![0, 2, 5, 6]);
        assert_eq!(v.first_one(), Some(0));
        assert_eq!(BitVec::zeros(8).first_one(), None);
    }

    #[test]
    fn basis_index_round_trip() {
        // index 0 of the vector is the most significant index bit
        let v = BitVec::parse("110").unwrap();
        assert_eq!(v.to_basis_index(), 6);
        for idx in 0..16 {
            assert_eq!(BitVec::from_basis_index(4, idx).to_basis_index(), idx);
        }
    }

    #[test]
    fn display_and_parse_round_trip() {
        let s = "011010";
        assert_eq!(BitVec::parse(s).unwrap().to_string(), s);
        assert!(BitVec::parse("01x").is_err());
    }

    #[test]
    fn serde_as_string() {
        let v = BitVec::parse("101").unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap(), "\"101\"");
        let back: BitVec = serde_json::from_str("\"101\"").unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn concat_and_slice() {
        let a = BitVec::parse("10").unwrap();
        let b = BitVec::parse("011").unwrap();
        let c = a.concat(&b);
        assert_eq!(c.to_string(), "10011");
        assert_eq!(c.slice(2, 5).to_string(), "011");
    }
}
