//! Condensed encodings of structures over all-unary vocabularies.
//!
//! Over such a vocabulary an element is fully described by its pattern: the
//! bit vector saying which of the `m` predicates it satisfies. A structure is
//! therefore determined up to isomorphism by how many elements carry each of
//! the `2^m` patterns, and `benc` writes exactly that multiset.

use num_bigint::BigUint;
use thiserror::Error;

use crate::bits::{BitReader, Bits};
use crate::eval::{models, EvalError};
use crate::logic::Formula;
use crate::natcode::{read_nat, write_nat};
use crate::structure::Structure;
use crate::vocab::Vocabulary;

/// Largest universe `reconstruct` will materialize.
pub const MAX_RECONSTRUCT: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AristotelianError {
    #[error("vocabulary is not all-unary without order")]
    NotAristotelian,
    #[error("malformed condensed encoding: {0}")]
    MalformedBenc(&'static str),
    #[error("encoded universe of {0} elements exceeds the reconstruction limit")]
    TooLarge(u64),
}

/// A validated condensed encoding: `1 v_1 ñ_1 … v_{2^m} ñ_{2^m}` with the
/// `v_j` listing `{0,1}^m` in lexicographic order and `Σ n_j > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BencString {
    bits: Bits,
    m: usize,
    counts: Vec<u64>,
}

impl BencString {
    pub fn parse(bits: Bits, m: usize) -> Result<Self, AristotelianError> {
        use AristotelianError::MalformedBenc;
        let mut r = BitReader::new(&bits);
        if r.read_bit() != Some(true) {
            return Err(MalformedBenc("does not start with 1"));
        }
        let mut counts = Vec::with_capacity(1 << m);
        let mut total: u64 = 0;
        for j in 0..1u64 << m {
            let v = r.read_bits(m).ok_or(MalformedBenc("truncated pattern"))?;
            if v.to_u64() != Some(j) && m > 0 {
                return Err(MalformedBenc("patterns out of order"));
            }
            let c = read_nat(&mut r).map_err(|_| MalformedBenc("bad count"))?;
            total = total
                .checked_add(c)
                .ok_or(MalformedBenc("count overflow"))?;
            counts.push(c);
        }
        if !r.is_at_end() {
            return Err(MalformedBenc("trailing bits"));
        }
        if total <= 1 {
            return Err(MalformedBenc("fewer than two elements"));
        }
        Ok(BencString { bits, m, counts })
    }

    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `n_j` for each pattern index `j`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn universe_size(&self) -> u64 {
        self.counts.iter().sum()
    }
}

fn check(vocab: &Vocabulary) -> Result<usize, AristotelianError> {
    if vocab.is_aristotelian() {
        Ok(vocab.len())
    } else {
        Err(AristotelianError::NotAristotelian)
    }
}

/// Pattern index of element `i`: predicate 1 is the most significant bit.
fn pattern(a: &Structure, i: usize) -> usize {
    (0..a.vocab().len()).fold(0, |acc, r| (acc << 1) | a.relation(r)[i] as usize)
}

pub fn benc(a: &Structure) -> Result<BencString, AristotelianError> {
    let m = check(a.vocab())?;
    let mut counts = vec![0u64; 1 << m];
    for i in 0..a.n() {
        counts[pattern(a, i)] += 1;
    }
    let mut bits = Bits::new();
    bits.push(true);
    for (j, &c) in counts.iter().enumerate() {
        for r in (0..m).rev() {
            bits.push((j >> r) & 1 == 1);
        }
        write_nat(&mut bits, c);
    }
    Ok(BencString { bits, m, counts })
}

/// Length of the unary re-encoding, i.e. `benc(A)` read as a binary numeral.
pub fn uenc_length(a: &Structure) -> Result<BigUint, AristotelianError> {
    Ok(bits_value(benc(a)?.bits()))
}

pub(crate) fn bits_value(bits: &Bits) -> BigUint {
    let mut bytes = vec![0u8; bits.len().div_ceil(8)];
    // little-endian bytes, bit 0 of byte 0 is the last input bit
    for (k, b) in bits.as_slice().iter().rev().enumerate() {
        if *b {
            bytes[k / 8] |= 1 << (k % 8);
        }
    }
    BigUint::from_bytes_le(&bytes)
}

fn value_bits(u: &BigUint) -> Bits {
    if u.bits() == 0 {
        return Bits::binary(0);
    }
    (0..u.bits()).rev().map(|k| u.bit(k)).collect()
}

/// Elements listed in canonical order: by matched pattern index, then by
/// natural order.
pub fn canonical_order(a: &Structure) -> Result<Vec<usize>, AristotelianError> {
    check(a.vocab())?;
    let mut order: Vec<usize> = (0..a.n()).collect();
    order.sort_by_key(|&i| (pattern(a, i), i));
    Ok(order)
}

/// Relabels `a` so that the element at position `k` of the canonical order
/// becomes `k`.
pub fn canonize(a: &Structure) -> Result<Structure, AristotelianError> {
    let order = canonical_order(a)?;
    let mut perm = vec![0; a.n()];
    for (k, &i) in order.iter().enumerate() {
        perm[i] = k;
    }
    Ok(a.permuted(&perm))
}

/// Builds a structure from a condensed encoding: start from all-zero
/// predicate strings, then give the next `n_j` elements pattern `v_j` for each
/// `j` in turn.
pub fn reconstruct(vocab: &Vocabulary, b: &BencString) -> Result<Structure, AristotelianError> {
    let m = check(vocab)?;
    if b.m() != m {
        return Err(AristotelianError::MalformedBenc(
            "pattern width differs from vocabulary",
        ));
    }
    let n = b.universe_size();
    if n > MAX_RECONSTRUCT {
        return Err(AristotelianError::TooLarge(n));
    }
    let n = n as usize;
    let mut w = vec![vec![false; n]; m];
    let mut next = 0usize;
    for (j, &c) in b.counts().iter().enumerate() {
        for i in next..next + c as usize {
            for (r, row) in w.iter_mut().enumerate() {
                row[i] = (j >> (m - 1 - r)) & 1 == 1;
            }
        }
        next += c as usize;
    }
    let bits: Bits = w.into_iter().flatten().collect();
    Ok(Structure::decode_bin(vocab.clone(), &bits).expect("length is m·n with n >= 2"))
}

/// Membership of a unary string, given by its length, in the set of unary
/// encodings of models of `sentence`. Lengths that are not valid encodings
/// are non-members.
pub fn decide_m(
    u_length: &BigUint,
    sentence: &Formula,
    vocab: &Vocabulary,
) -> Result<bool, EvalError> {
    let Ok(m) = check(vocab) else {
        return Ok(false);
    };
    let Ok(b) = BencString::parse(value_bits(u_length), m) else {
        return Ok(false);
    };
    match reconstruct(vocab, &b) {
        Ok(a) => models(&a, sentence),
        Err(_) => Ok(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::natcode::encode_nat;

    fn unary() -> Vocabulary {
        Vocabulary::parse("R:1").unwrap()
    }

    #[test]
    fn benc_examples() {
        let a = Structure::from_tuples(unary(), 2, &[("R", &[&[0]])]).unwrap();
        assert_eq!(benc(&a).unwrap().bits().to_string(), "10101111011");
        assert_eq!(uenc_length(&a).unwrap(), BigUint::from(1403u32));

        let e = Structure::empty(unary(), 2).unwrap();
        let expect = format!("10{}1{}", encode_nat(2), encode_nat(0));
        assert_eq!(benc(&e).unwrap().bits().to_string(), expect);

        let g = Structure::empty(Vocabulary::parse("E:2").unwrap(), 2).unwrap();
        assert_eq!(benc(&g), Err(AristotelianError::NotAristotelian));
        let o = Structure::empty(Vocabulary::parse("R:1 <").unwrap(), 2).unwrap();
        assert_eq!(benc(&o), Err(AristotelianError::NotAristotelian));
    }

    #[test]
    fn canonical_order_examples() {
        let a = Structure::from_tuples(unary(), 2, &[("R", &[&[0]])]).unwrap();
        assert_eq!(canonical_order(&a).unwrap(), vec![1, 0]);
        let e = Structure::empty(unary(), 3).unwrap();
        assert_eq!(canonical_order(&e).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn reconstruct_examples() {
        let b = BencString::parse(
            format!("10{}1{}", encode_nat(2), encode_nat(0))
                .parse()
                .unwrap(),
            1,
        )
        .unwrap();
        assert_eq!(
            reconstruct(&unary(), &b).unwrap(),
            Structure::empty(unary(), 2).unwrap()
        );

        let one = format!("10{}1{}", encode_nat(1), encode_nat(0));
        assert_eq!(
            BencString::parse(one.parse().unwrap(), 1),
            Err(AristotelianError::MalformedBenc("fewer than two elements"))
        );
        // patterns must appear in order
        let swapped = format!("11{}0{}", encode_nat(1), encode_nat(1));
        assert!(BencString::parse(swapped.parse().unwrap(), 1).is_err());
    }

    #[test]
    fn reconstruct_matches_canonization() {
        let v = Vocabulary::parse("P:1 Q:1").unwrap();
        for a in crate::structure::enumerate_structures(&v, 4) {
            let r = reconstruct(&v, &benc(&a).unwrap()).unwrap();
            assert_eq!(r, canonize(&a).unwrap());
        }
    }

    #[test]
    fn value_bits_round_trip() {
        for s in ["1", "10", "10101111011"] {
            let b: Bits = s.parse().unwrap();
            assert_eq!(value_bits(&bits_value(&b)), b);
        }
    }
}
