//! Self-delimiting code for nonnegative integers, and the binary-length function ℓ.
//!
//! A value `x` is written as `1^|c| 0 c b` where `b` is the binary form of `x`
//! (`"0"` for zero) and `c` is the binary form of `|b|`. The unary prefix says how
//! long the length field is, so a reader always knows where the codeword ends.

use thiserror::Error;

use crate::bits::{BitReader, Bits};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("bit stream ended inside a codeword at offset {0}")]
    Truncated(usize),
    #[error("non-canonical codeword at offset {0}")]
    NonCanonical(usize),
    #[error("codeword at offset {0} does not fit in 64 bits")]
    Overflow(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("binary length is undefined for zero")]
pub struct ZeroLength;

/// `ℓ^(k)(x)` where `ℓ(x) = ⌊log₂ x⌋ + 1`.
pub fn ell(x: u64, k: u32) -> Result<u64, ZeroLength> {
    if x == 0 {
        return Err(ZeroLength);
    }
    let mut v = x;
    for _ in 0..k {
        v = (u64::BITS - v.leading_zeros()) as u64;
    }
    Ok(v)
}

pub fn encode_nat(x: u64) -> Bits {
    let mut out = Bits::new();
    write_nat(&mut out, x);
    out
}

pub fn write_nat(out: &mut Bits, x: u64) {
    let b = Bits::binary(x);
    let c = Bits::binary(b.len() as u64);
    for _ in 0..c.len() {
        out.push(true);
    }
    out.push(false);
    out.extend_from(&c);
    out.extend_from(&b);
}

/// Code length of `x` without materializing the codeword.
pub fn nat_code_len(x: u64) -> usize {
    let b = if x == 0 {
        1
    } else {
        (u64::BITS - x.leading_zeros()) as usize
    };
    let c = (usize::BITS - b.leading_zeros()) as usize;
    2 * c + 1 + b
}

/// Decodes one codeword from the front of `bits`, returning the value and the
/// number of bits consumed.
pub fn decode_nat(bits: &Bits) -> Result<(u64, usize), CodeError> {
    let mut r = BitReader::new(bits);
    let v = read_nat(&mut r)?;
    Ok((v, r.position()))
}

pub fn read_nat(r: &mut BitReader<'_>) -> Result<u64, CodeError> {
    let start = r.position();
    let mut width = 0usize;
    loop {
        match r.read_bit() {
            Some(true) => width += 1,
            Some(false) => break,
            None => return Err(CodeError::Truncated(start)),
        }
    }
    if width == 0 {
        return Err(CodeError::NonCanonical(start));
    }
    if width > 7 {
        return Err(CodeError::Overflow(start));
    }
    let c = r.read_bits(width).ok_or(CodeError::Truncated(start))?;
    if !c.get(0).unwrap_or(false) {
        return Err(CodeError::NonCanonical(start));
    }
    let len = c.to_u64().ok_or(CodeError::Overflow(start))? as usize;
    if len > 64 {
        return Err(CodeError::Overflow(start));
    }
    let b = r.read_bits(len).ok_or(CodeError::Truncated(start))?;
    // binary form has no leading zero except the single-digit "0"
    if len > 1 && !b.get(0).unwrap_or(false) {
        return Err(CodeError::NonCanonical(start));
    }
    Ok(b.to_u64().expect("at most 64 bits"))
}
