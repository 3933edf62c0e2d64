//! Well-formedness of formulas relative to a vocabulary.

use std::collections::HashSet;

use thiserror::Error;

use super::ast::Formula;
use crate::vocab::Vocabulary;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WfError {
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("relation `{0}` is neither in the vocabulary nor bound")]
    UnknownRelation(String),
    #[error("`{rel}` used with {found} arguments but has arity {expected}")]
    ArityMismatch {
        rel: String,
        expected: usize,
        found: usize,
    },
    #[error("`<` and BIT need an ordered vocabulary")]
    NoOrder,
    #[error("relation variable `{0}` shadows a vocabulary symbol")]
    ShadowedSymbol(String),
    #[error("`{0}` occurs negatively inside its least fixpoint")]
    PositivityViolation(String),
    #[error("closure source and target tuples differ in length")]
    ClosureArity,
}

/// Checks that `f` is a well-formed formula over `vocab` whose free variables
/// all lie in `free`.
pub fn check_formula(f: &Formula, vocab: &Vocabulary, free: &[String]) -> Result<(), WfError> {
    let mut ctx = Ctx {
        vocab,
        vars: free.to_vec(),
        rels: Vec::new(),
    };
    ctx.check(f)
}

pub fn check_sentence(f: &Formula, vocab: &Vocabulary) -> Result<(), WfError> {
    check_formula(f, vocab, &[])
}

struct Ctx<'a> {
    vocab: &'a Vocabulary,
    vars: Vec<String>,
    rels: Vec<(String, usize)>,
}

impl Ctx<'_> {
    fn var(&self, v: &str) -> Result<(), WfError> {
        if self.vars.iter().any(|x| x == v) {
            Ok(())
        } else {
            Err(WfError::UnboundVariable(v.to_string()))
        }
    }

    fn arity(&self, rel: &str) -> Result<usize, WfError> {
        if let Some((_, a)) = self.rels.iter().rev().find(|(r, _)| r == rel) {
            return Ok(*a);
        }
        self.vocab
            .arity_of(rel)
            .ok_or_else(|| WfError::UnknownRelation(rel.to_string()))
    }

    fn bind_rel(&mut self, rel: &str, arity: usize) -> Result<(), WfError> {
        if self.vocab.index_of(rel).is_some() {
            return Err(WfError::ShadowedSymbol(rel.to_string()));
        }
        self.rels.push((rel.to_string(), arity));
        Ok(())
    }

    fn scoped<T>(
        &mut self,
        vars: &[String],
        body: impl FnOnce(&mut Self) -> Result<T, WfError>,
    ) -> Result<T, WfError> {
        let mark = self.vars.len();
        self.vars.extend(vars.iter().cloned());
        let out = body(self);
        self.vars.truncate(mark);
        out
    }

    fn check(&mut self, f: &Formula) -> Result<(), WfError> {
        use Formula::*;
        match f {
            Atom { rel, args } => {
                let expected = self.arity(rel)?;
                if expected != args.len() {
                    return Err(WfError::ArityMismatch {
                        rel: rel.clone(),
                        expected,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.var(a))
            }
            Eq(a, b) | Neq(a, b) => {
                self.var(a)?;
                self.var(b)
            }
            Lt(a, b) | Bit(a, b) => {
                if !self.vocab.has_order() {
                    return Err(WfError::NoOrder);
                }
                self.var(a)?;
                self.var(b)
            }
            Char(_) => Ok(()),
            Not(a) => self.check(a),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                self.check(a)?;
                self.check(b)
            }
            Exists(x, a) | Forall(x, a) => self.scoped(std::slice::from_ref(x), |c| c.check(a)),
            ExistsSo { rel, arity, body } | ForallSo { rel, arity, body } => {
                self.bind_rel(rel, *arity)?;
                let out = self.check(body);
                self.rels.pop();
                out
            }
            Tc {
                from,
                to,
                body,
                src,
                dst,
            } => {
                if from.len() != to.len() || src.len() != from.len() || dst.len() != from.len() {
                    return Err(WfError::ClosureArity);
                }
                let bound: Vec<String> = from.iter().chain(to).cloned().collect();
                self.scoped(&bound, |c| c.check(body))?;
                src.iter().chain(dst).try_for_each(|a| self.var(a))
            }
            Lfp(fp) | Pfp(fp) => {
                if fp.vars.len() != fp.args.len() {
                    return Err(WfError::ClosureArity);
                }
                if matches!(f, Lfp(_)) && !positive_in(&fp.body, &fp.rel, true) {
                    return Err(WfError::PositivityViolation(fp.rel.clone()));
                }
                self.bind_rel(&fp.rel, fp.vars.len())?;
                let out = self.scoped(&fp.vars, |c| c.check(&fp.body));
                self.rels.pop();
                out?;
                fp.args.iter().try_for_each(|a| self.var(a))
            }
        }
    }
}

/// True when every free occurrence of `rel` in `f` sits under an even number
/// of negations (`positive`) or an odd number (`!positive`). Occurrences inside
/// a partial fixpoint body count as both signs.
pub fn positive_in(f: &Formula, rel: &str, positive: bool) -> bool {
    use Formula::*;
    match f {
        Atom { rel: r, .. } => positive || r != rel,
        Eq(..) | Neq(..) | Lt(..) | Bit(..) | Char(_) => true,
        Not(a) => positive_in(a, rel, !positive),
        And(a, b) | Or(a, b) => positive_in(a, rel, positive) && positive_in(b, rel, positive),
        Implies(a, b) => positive_in(a, rel, !positive) && positive_in(b, rel, positive),
        Exists(_, a) | Forall(_, a) => positive_in(a, rel, positive),
        ExistsSo { rel: r, body, .. } | ForallSo { rel: r, body, .. } => {
            r == rel || positive_in(body, rel, positive)
        }
        Tc { body, .. } => positive_in(body, rel, positive),
        Lfp(fp) => fp.rel == rel || positive_in(&fp.body, rel, positive),
        Pfp(fp) => {
            fp.rel == rel || (positive_in(&fp.body, rel, true) && positive_in(&fp.body, rel, false))
        }
    }
}

/// Relation names bound anywhere in `f` that collide with `names`.
pub fn bound_collisions<'a>(f: &Formula, names: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    let bound = f.bound_relation_names();
    let names: HashSet<&str> = names.into_iter().collect();
    bound
        .into_iter()
        .filter(|b| names.contains(b.as_str()))
        .collect()
}
