//! Bit strings and a cursor for decoding self-delimiting codes.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A finite string over {0,1}, rendered as ASCII `'0'`/`'1'`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits(Vec<bool>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid bit character {found:?} at offset {offset}")]
pub struct BitsParseError {
    pub offset: usize,
    pub found: char,
}

impl Bits {
    pub fn new() -> Self {
        Bits(Vec::new())
    }

    pub fn zeros(len: usize) -> Self {
        Bits(vec![false; len])
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        Bits(bits)
    }

    /// Plain binary representation, most significant bit first. Zero is `"0"`.
    pub fn binary(mut x: u64) -> Self {
        if x == 0 {
            return Bits(vec![false]);
        }
        let mut out = Vec::with_capacity(64);
        while x > 0 {
            out.push(x & 1 == 1);
            x >>= 1;
        }
        out.reverse();
        Bits(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn push(&mut self, b: bool) {
        self.0.push(b);
    }

    pub fn extend_from(&mut self, other: &Bits) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<bool> {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    /// Flip the bit at `i`. Panics when out of range.
    pub fn flip(&mut self, i: usize) {
        self.0[i] = !self.0[i];
    }

    /// Reads the string as an unsigned binary numeral; `None` on overflow.
    pub fn to_u64(&self) -> Option<u64> {
        let mut v: u64 = 0;
        for &b in &self.0 {
            v = v.checked_mul(2)?.checked_add(b as u64)?;
        }
        Some(v)
    }

    /// Hex rendering, most significant nibble first, zero-padded on the right.
    pub fn to_hex(&self) -> String {
        self.0
            .chunks(4)
            .map(|chunk| {
                let mut v = 0u8;
                for i in 0..4 {
                    v = (v << 1) | chunk.get(i).copied().unwrap_or(false) as u8;
                }
                char::from_digit(v as u32, 16).unwrap()
            })
            .collect()
    }

    /// Inverse of [`Bits::to_hex`]; `len` trims the padding.
    pub fn from_hex(hex: &str, len: usize) -> Option<Self> {
        if hex.len() != len.div_ceil(4) {
            return None;
        }
        let mut out = Vec::with_capacity(hex.len() * 4);
        for c in hex.chars() {
            let v = c.to_digit(16)?;
            for shift in (0..4).rev() {
                out.push((v >> shift) & 1 == 1);
            }
        }
        if out[len..].iter().any(|&b| b) {
            return None;
        }
        out.truncate(len);
        Some(Bits(out))
    }
}

impl From<Vec<bool>> for Bits {
    fn from(v: Vec<bool>) -> Self {
        Bits(v)
    }
}

impl FromIterator<bool> for Bits {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Bits(iter.into_iter().collect())
    }
}

impl FromStr for Bits {
    type Err = BitsParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(offset, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                found => Err(BitsParseError { offset, found }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Bits)
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Sequential reader over a bit string.
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a Bits) -> Self {
        BitReader {
            bits: bits.as_slice(),
            pos: 0,
        }
    }

    pub fn from_slice(bits: &'a [bool]) -> Self {
        BitReader { bits, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn is_at_end(&self) -> bool {
        self.pos == self.bits.len()
    }

    pub fn read_bit(&mut self) -> Option<bool> {
        let b = self.bits.get(self.pos).copied()?;
        self.pos += 1;
        Some(b)
    }

    pub fn read_bits(&mut self, n: usize) -> Option<Bits> {
        if self.remaining() < n {
            return None;
        }
        let out = Bits(self.bits[self.pos..self.pos + n].to_vec());
        self.pos += n;
        Some(out)
    }
}
