//! Encoding sentences: identically false sentences whose quantifier prefix
//! spells a bit string, `∃` for 1 and `∀` for 0.

use thiserror::Error;

use super::ast::Formula;
use crate::bits::Bits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("cannot encode the empty string")]
pub struct EmptyString;

fn var(i: usize) -> String {
    format!("x{i}")
}

/// `Q x1 … Q xk (x1 != x1 & … & xk != xk)` with the conjunction nested to the
/// left.
pub fn psi_encode(w: &Bits) -> Result<Formula, EmptyString> {
    if w.is_empty() {
        return Err(EmptyString);
    }
    let k = w.len();
    let mut matrix = Formula::Neq(var(1), var(1));
    for i in 2..=k {
        matrix = Formula::And(Box::new(matrix), Box::new(Formula::Neq(var(i), var(i))));
    }
    let mut f = matrix;
    for i in (1..=k).rev() {
        f = if w.get(i - 1) == Some(true) {
            Formula::Exists(var(i), Box::new(f))
        } else {
            Formula::Forall(var(i), Box::new(f))
        };
    }
    Ok(f)
}

/// The string `w` with `psi_encode(w) == f`, if any.
pub fn psi_recognize(f: &Formula) -> Option<Bits> {
    let mut w = Bits::new();
    let mut cur = f;
    loop {
        match cur {
            Formula::Exists(x, body) | Formula::Forall(x, body) if *x == var(w.len() + 1) => {
                w.push(matches!(cur, Formula::Exists(..)));
                cur = body;
            }
            _ => break,
        }
    }
    if w.is_empty() {
        return None;
    }
    // walk the left spine of the matrix from the last conjunct down
    for i in (2..=w.len()).rev() {
        match cur {
            Formula::And(rest, last) if **last == Formula::Neq(var(i), var(i)) => cur = rest,
            _ => return None,
        }
    }
    (*cur == Formula::Neq(var(1), var(1))).then_some(w)
}
