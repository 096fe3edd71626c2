//! Packed bit vectors for bond and site configurations.

use std::fmt;

use crate::error::{DacError, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Bits::zeros(len);
        for i in 0..len {
            b.set(i, true);
        }
        b
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut b = Bits::zeros(len);
        for i in 0..len {
            if f(i) {
                b.set(i, true);
            }
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i & 63);
        if value {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// `self[i] <= other[i]` for every index.
    pub fn is_subset_of(&self, other: &Bits) -> bool {
        self.len == other.len && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Hex digit `k` holds bits `4k..4k+4`, least significant bit first.
    /// Digits are written in increasing `k`, so bit 0 is the low bit of the
    /// first character.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        (0..digits)
            .map(|k| {
                let mut d = 0u32;
                for j in 0..4 {
                    let i = 4 * k + j;
                    if i < self.len && self.get(i) {
                        d |= 1 << j;
                    }
                }
                char::from_digit(d, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(hex: &str, len: usize) -> Result<Self> {
        if hex.len() != len.div_ceil(4) {
            return Err(DacError::InvalidArgument(format!(
                "hex string of length {} cannot hold exactly {len} bits",
                hex.len()
            )));
        }
        let mut b = Bits::zeros(len);
        for (k, c) in hex.chars().enumerate() {
            let d = c
                .to_digit(16)
                .ok_or_else(|| DacError::InvalidArgument(format!("bad hex digit {c:?}")))?;
            for j in 0..4 {
                let i = 4 * k + j;
                if d >> j & 1 == 1 {
                    if i >= len {
                        return Err(DacError::InvalidArgument("padding bits must be zero".into()));
                    }
                    b.set(i, true);
                }
            }
        }
        Ok(b)
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// One bit per edge, 1 = open.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BondConfig(pub Bits);

/// One bit per vertex, 1 = black.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct SiteConfig(pub Bits);

impl BondConfig {
    pub fn closed(edges: usize) -> Self {
        BondConfig(Bits::zeros(edges))
    }

    pub fn from_mask(edges: usize, mask: u64) -> Self {
        BondConfig(Bits::from_fn(edges, |i| i < 64 && mask >> i & 1 == 1))
    }

    #[inline]
    pub fn is_open(&self, e: usize) -> bool {
        self.0.get(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl SiteConfig {
    pub fn white(vertices: usize) -> Self {
        SiteConfig(Bits::zeros(vertices))
    }

    pub fn black(vertices: usize) -> Self {
        SiteConfig(Bits::ones(vertices))
    }

    pub fn from_mask(vertices: usize, mask: u64) -> Self {
        SiteConfig(Bits::from_fn(vertices, |i| i < 64 && mask >> i & 1 == 1))
    }

    #[inline]
    pub fn is_black(&self, v: usize) -> bool {
        self.0.get(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Bit `v` of the result is the colour of vertex `v`; requires at most 64 vertices.
    pub fn to_mask(&self) -> u64 {
        assert!(self.len() <= 64);
        (0..self.len()).filter(|&v| self.is_black(v)).fold(0, |m, v| m | 1 << v)
    }
}
