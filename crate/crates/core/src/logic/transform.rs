//! Transport of a sentence over a one-symbol base vocabulary to an arbitrary
//! target vocabulary by rewriting every atom of the base symbol.

use thiserror::Error;

use super::ast::{atom, Formula};
use super::check::{bound_collisions, check_sentence, WfError};
use crate::vocab::Vocabulary;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("source sentence is not over the base vocabulary {expected}: {reason}")]
    WrongSourceVocabulary {
        expected: Vocabulary,
        reason: WfError,
    },
    #[error("source sentence contains a characteristic leaf")]
    CharInSource,
    #[error("target vocabulary lacks `<`")]
    NoOrderInTarget,
    #[error("target vocabulary has no symbol of arity above 1")]
    AristotelianTarget,
    #[error("source binds `{0}`, which the rewrite would capture")]
    CapturedSymbol(String),
}

/// Least name in `prefix1, prefix2, …` that does not occur in `f`.
pub fn fresh_variable(f: &Formula, prefix: &str) -> String {
    let used = f.variable_names();
    (1..)
        .map(|i| format!("{prefix}{i}"))
        .find(|v| !used.contains(v))
        .expect("unbounded supply")
}

fn check_source(f: &Formula, base: Vocabulary, target: &Vocabulary) -> Result<(), TransformError> {
    check_sentence(f, &base).map_err(|reason| TransformError::WrongSourceVocabulary {
        expected: base,
        reason,
    })?;
    if f.contains_char() {
        return Err(TransformError::CharInSource);
    }
    let names = target.symbols().iter().map(|s| s.name.as_str());
    if let Some(name) = bound_collisions(f, names).into_iter().next() {
        return Err(TransformError::CapturedSymbol(name));
    }
    Ok(())
}

fn rewrite_atoms(f: &Formula, map: &impl Fn(&[String]) -> Formula) -> Formula {
    use Formula::*;
    let mut out = f.clone();
    fn go(f: &mut Formula, map: &impl Fn(&[String]) -> Formula) {
        if let Atom { rel, args } = f {
            if rel == "R" {
                *f = map(args);
            }
            return;
        }
        for c in f.children_mut() {
            go(c, map);
        }
    }
    go(&mut out, map);
    out
}

/// Ordered case: source vocabulary `{R¹, <}`. With `R₁` the first target
/// symbol, `R(t)` becomes `R₁(t)` when `R₁` is unary and otherwise
/// `∃y R₁(y,…,y,t)` for a fresh `y`.
pub fn apply_t_ord(upsilon: &Formula, tau: &Vocabulary) -> Result<Formula, TransformError> {
    if !tau.has_order() {
        return Err(TransformError::NoOrderInTarget);
    }
    check_source(upsilon, Vocabulary::sigma_ordered(), tau)?;
    let first = &tau.symbols()[0];
    let name = first.name.clone();
    if first.arity == 1 {
        return Ok(rewrite_atoms(upsilon, &|args| Formula::Atom {
            rel: name.clone(),
            args: args.to_vec(),
        }));
    }
    let y = fresh_variable(upsilon, "y");
    let pad = first.arity - 1;
    Ok(rewrite_atoms(upsilon, &|args| {
        let mut full: Vec<&str> = vec![y.as_str(); pad];
        full.push(&args[0]);
        Formula::Exists(y.clone(), Box::new(atom(&name, &full)))
    }))
}

/// Unordered case: source vocabulary `{R²}`. With `R_k` the first target
/// symbol of arity above 1, `R(s,t)` becomes `R_k(s,t)` for a binary `R_k`
/// and otherwise `∃z R_k(s,t,z,…,z)` for a fresh `z`.
pub fn apply_t_unord(upsilon: &Formula, tau: &Vocabulary) -> Result<Formula, TransformError> {
    let target = tau
        .symbols()
        .iter()
        .find(|s| s.arity > 1)
        .ok_or(TransformError::AristotelianTarget)?;
    check_source(upsilon, Vocabulary::sigma(), tau)?;
    let name = target.name.clone();
    if target.arity == 2 {
        return Ok(rewrite_atoms(upsilon, &|args| Formula::Atom {
            rel: name.clone(),
            args: args.to_vec(),
        }));
    }
    let z = fresh_variable(upsilon, "z");
    let pad = target.arity - 2;
    Ok(rewrite_atoms(upsilon, &|args| {
        let mut full: Vec<&str> = vec![&args[0], &args[1]];
        full.extend(std::iter::repeat_n(z.as_str(), pad));
        Formula::Exists(z.clone(), Box::new(atom(&name, &full)))
    }))
}
