use std::cmp::Ordering;
use std::fmt;

use super::words_for;

/// A vector over GF(2). Bits beyond `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF2Vector {
    len: usize,
    words: Vec<u64>,
}

impl GF2Vector {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self { len, words: vec![!0; words_for(len)] };
        v.clear_tail();
        v
    }

    /// Vector with ones at the given positions. Repeated positions cancel.
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i))
    }

    /// Builds from raw words; bits past `len` are discarded.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = Self { len, words };
        v.clear_tail();
        v
    }

    /// Parses a string of `0`/`1` characters, position 0 first.
    pub fn parse(s: &str) -> Option<Self> {
        let bits: Option<Vec<bool>> = s
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        bits.map(|b| Self::from_bools(&b))
    }

    fn clear_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    /// Support size.
    #[inline]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &GF2Vector) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &GF2Vector) -> GF2Vector {
        let mut v = self.clone();
        v.xor_assign(other);
        v
    }

    pub fn and(&self, other: &GF2Vector) -> GF2Vector {
        assert_eq!(self.len, other.len, "length mismatch");
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        GF2Vector { len: self.len, words }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &GF2Vector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones % 2 == 1
    }

    /// Lowest set position, if any.
    pub fn first_one(&self) -> Option<usize> {
        self.first_one_from_word(0)
    }

    #[inline]
    pub(crate) fn first_one_from_word(&self, start: usize) -> Option<usize> {
        self.words[start..]
            .iter()
            .position(|&w| w != 0)
            .map(|p| (start + p) * 64 + self.words[start + p].trailing_zeros() as usize)
    }

    /// XOR `other` into `self`, skipping words below `from_word` (known zero in `other`).
    #[inline]
    pub(crate) fn xor_from(&mut self, other: &GF2Vector, from_word: usize) {
        for (a, b) in self.words[from_word..].iter_mut().zip(&other.words[from_word..]) {
            *a ^= b;
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    /// Orders by weight, then lexicographically by sorted support.
    /// This is the order in which [`super::enumerate_by_weight`] emits vectors.
    pub fn weight_lex_cmp(&self, other: &GF2Vector) -> Ordering {
        self.weight().cmp(&other.weight()).then_with(|| self.iter_ones().cmp(other.iter_ones()))
    }
}

impl fmt::Debug for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF2Vector({self})")
    }
}

impl fmt::Display for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}
