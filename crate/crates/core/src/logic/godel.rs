//! Self-delimiting binary serialization of formulas.
//!
//! Each node is a tag written with the integer code, followed by its fields in
//! declaration order and then its children. Names are a length and one integer
//! per byte; payload bit strings are a length followed by the raw bits.

use thiserror::Error;

use super::ast::{CharLeaf, Fixpoint, Formula};
use crate::bits::{BitReader, Bits};
use crate::natcode::{read_nat, write_nat, CodeError};
use crate::vocab::{is_relation_name, is_variable_name, MAX_ARITY, MAX_NAME_LEN};

const MAX_DEPTH: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GodelError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("unknown node tag {0}")]
    UnknownTag(u64),
    #[error("invalid name in code")]
    BadName,
    #[error("invalid arity in code")]
    BadArity,
    #[error("code has trailing bits")]
    TrailingBits,
    #[error("code nests too deeply")]
    TooDeep,
    #[error("characteristic leaf payload: {0}")]
    Payload(String),
}

pub fn godel_encode(f: &Formula) -> Bits {
    let mut out = Bits::new();
    write_formula(&mut out, f);
    out
}

fn write_name(out: &mut Bits, s: &str) {
    write_nat(out, s.len() as u64);
    for b in s.bytes() {
        write_nat(out, b as u64);
    }
}

fn write_names(out: &mut Bits, names: &[String]) {
    for n in names {
        write_name(out, n);
    }
}

fn write_payload(out: &mut Bits, p: &Bits) {
    write_nat(out, p.len() as u64);
    out.extend_from(p);
}

fn write_formula(out: &mut Bits, f: &Formula) {
    use Formula::*;
    match f {
        Atom { rel, args } => {
            write_nat(out, 0);
            write_name(out, rel);
            write_nat(out, args.len() as u64);
            write_names(out, args);
        }
        Eq(a, b) | Neq(a, b) | Lt(a, b) | Bit(a, b) => {
            let tag = match f {
                Eq(..) => 1,
                Neq(..) => 2,
                Lt(..) => 3,
                _ => 4,
            };
            write_nat(out, tag);
            write_name(out, a);
            write_name(out, b);
        }
        Not(a) => {
            write_nat(out, 5);
            write_formula(out, a);
        }
        And(a, b) | Or(a, b) | Implies(a, b) => {
            let tag = match f {
                And(..) => 6,
                Or(..) => 7,
                _ => 8,
            };
            write_nat(out, tag);
            write_formula(out, a);
            write_formula(out, b);
        }
        Exists(x, a) | Forall(x, a) => {
            write_nat(out, if matches!(f, Exists(..)) { 9 } else { 10 });
            write_name(out, x);
            write_formula(out, a);
        }
        ExistsSo { rel, arity, body } | ForallSo { rel, arity, body } => {
            write_nat(out, if matches!(f, ExistsSo { .. }) { 11 } else { 12 });
            write_name(out, rel);
            write_nat(out, *arity as u64);
            write_formula(out, body);
        }
        Tc {
            from,
            to,
            body,
            src,
            dst,
        } => {
            write_nat(out, 13);
            write_nat(out, from.len() as u64);
            write_names(out, from);
            write_names(out, to);
            write_formula(out, body);
            write_names(out, src);
            write_names(out, dst);
        }
        Lfp(fp) | Pfp(fp) => {
            write_nat(out, if matches!(f, Lfp(_)) { 14 } else { 15 });
            write_name(out, &fp.rel);
            write_nat(out, fp.vars.len() as u64);
            write_names(out, &fp.vars);
            write_formula(out, &fp.body);
            write_names(out, &fp.args);
        }
        Char(leaf) => {
            let tag = match leaf {
                CharLeaf::Ord { .. } => 16,
                CharLeaf::Unord { .. } => 17,
                CharLeaf::CoUnord { .. } => 18,
                CharLeaf::NpConp { .. } => 19,
                CharLeaf::Cfg { .. } => 20,
            };
            write_nat(out, tag);
            for p in leaf.payloads() {
                write_payload(out, p);
            }
        }
    }
}

/// Decodes a complete code; the whole input must be consumed.
pub fn godel_decode(bits: &Bits) -> Result<Formula, GodelError> {
    let mut r = BitReader::new(bits);
    let f = read_formula(&mut r, 0)?;
    if !r.is_at_end() {
        return Err(GodelError::TrailingBits);
    }
    Ok(f)
}

fn read_name(r: &mut BitReader<'_>) -> Result<String, GodelError> {
    let len = read_nat(r)?;
    if len == 0 || len > MAX_NAME_LEN as u64 {
        return Err(GodelError::BadName);
    }
    let mut bytes = Vec::with_capacity(len as usize);
    for _ in 0..len {
        let b = read_nat(r)?;
        bytes.push(u8::try_from(b).map_err(|_| GodelError::BadName)?);
    }
    String::from_utf8(bytes).map_err(|_| GodelError::BadName)
}

fn read_var(r: &mut BitReader<'_>) -> Result<String, GodelError> {
    let v = read_name(r)?;
    if is_variable_name(&v) {
        Ok(v)
    } else {
        Err(GodelError::BadName)
    }
}

fn read_rel(r: &mut BitReader<'_>) -> Result<String, GodelError> {
    let v = read_name(r)?;
    if is_relation_name(&v) {
        Ok(v)
    } else {
        Err(GodelError::BadName)
    }
}

fn read_vars(r: &mut BitReader<'_>, k: usize) -> Result<Vec<String>, GodelError> {
    (0..k).map(|_| read_var(r)).collect()
}

fn read_arity(r: &mut BitReader<'_>) -> Result<usize, GodelError> {
    match read_nat(r)? {
        0 => Err(GodelError::BadArity),
        a if a > MAX_ARITY as u64 => Err(GodelError::BadArity),
        a => Ok(a as usize),
    }
}

fn read_payload(r: &mut BitReader<'_>) -> Result<Bits, GodelError> {
    let len = read_nat(r)?;
    if len as usize > r.remaining() {
        return Err(CodeError::Truncated(r.position()).into());
    }
    Ok(r.read_bits(len as usize).expect("length checked"))
}

fn read_formula(r: &mut BitReader<'_>, depth: usize) -> Result<Formula, GodelError> {
    if depth > MAX_DEPTH {
        return Err(GodelError::TooDeep);
    }
    let sub = |r: &mut BitReader<'_>| read_formula(r, depth + 1).map(Box::new);
    let tag = read_nat(r)?;
    Ok(match tag {
        0 => {
            let rel = read_rel(r)?;
            let k = read_arity(r)?;
            Formula::Atom {
                rel,
                args: read_vars(r, k)?,
            }
        }
        1..=4 => {
            let a = read_var(r)?;
            let b = read_var(r)?;
            match tag {
                1 => Formula::Eq(a, b),
                2 => Formula::Neq(a, b),
                3 => Formula::Lt(a, b),
                _ => Formula::Bit(a, b),
            }
        }
        5 => Formula::Not(sub(r)?),
        6..=8 => {
            let a = sub(r)?;
            let b = sub(r)?;
            match tag {
                6 => Formula::And(a, b),
                7 => Formula::Or(a, b),
                _ => Formula::Implies(a, b),
            }
        }
        9 | 10 => {
            let x = read_var(r)?;
            let body = sub(r)?;
            if tag == 9 {
                Formula::Exists(x, body)
            } else {
                Formula::Forall(x, body)
            }
        }
        11 | 12 => {
            let rel = read_rel(r)?;
            let arity = read_arity(r)?;
            let body = sub(r)?;
            if tag == 11 {
                Formula::ExistsSo { rel, arity, body }
            } else {
                Formula::ForallSo { rel, arity, body }
            }
        }
        13 => {
            let k = read_arity(r)?;
            let from = read_vars(r, k)?;
            let to = read_vars(r, k)?;
            let body = sub(r)?;
            let src = read_vars(r, k)?;
            let dst = read_vars(r, k)?;
            Formula::Tc {
                from,
                to,
                body,
                src,
                dst,
            }
        }
        14 | 15 => {
            let rel = read_rel(r)?;
            let k = read_arity(r)?;
            let vars = read_vars(r, k)?;
            let body = sub(r)?;
            let args = read_vars(r, k)?;
            let fp = Fixpoint {
                rel,
                vars,
                body,
                args,
            };
            if tag == 14 {
                Formula::Lfp(fp)
            } else {
                Formula::Pfp(fp)
            }
        }
        16..=20 => {
            let (keyword, count) = match tag {
                16 => ("CHAR_ORD", 3),
                17 => ("CHAR_UNORD", 3),
                18 => ("COCHAR_UNORD", 3),
                19 => ("CHAR_NPCONP", 2),
                _ => ("CHAR_CFG", 1),
            };
            let payloads = (0..count)
                .map(|_| read_payload(r))
                .collect::<Result<Vec<_>, _>>()?;
            let leaf = CharLeaf::from_parts(keyword, payloads).expect("payload count matches");
            crate::charsets::validate_leaf(&leaf)
                .map_err(|e| GodelError::Payload(e.to_string()))?;
            Formula::Char(leaf)
        }
        t => return Err(GodelError::UnknownTag(t)),
    })
}
