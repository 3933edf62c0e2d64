//! Brute-force model checking.
//!
//! Formulas are first compiled against a vocabulary: variables become slots in
//! a flat environment, relation symbols become indices, and subformulas whose
//! value cannot depend on the assignment are folded to constants. Everything
//! else is evaluated by exhaustive search.

mod compile;

use std::sync::OnceLock;

use rayon::prelude::*;
use thiserror::Error;

use crate::charsets::LeafCache;
use crate::logic::{Formula, WfError};
use crate::structure::{structures_of_size, Structure};
use crate::vocab::Vocabulary;

pub use compile::Compiled;

/// Default nesting limit for characteristic leaves.
pub const DEFAULT_CHAR_BUDGET: u32 = 8;

/// Exhaustive relation quantification is refused above this many tuples.
pub const MAX_RELATION_TUPLES: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    IllFormed(#[from] WfError),
    #[error("characteristic leaves nest deeper than the recursion budget")]
    RecursionBudgetExhausted,
    #[error("quantifying over relations with {0} possible tuples is infeasible")]
    Infeasible(usize),
    #[error("characteristic leaf payload: {0}")]
    Payload(String),
}

/// Model checker with a memo table for characteristic leaves.
#[derive(Debug)]
pub struct Evaluator {
    budget: u32,
    jobs: usize,
    leaves: LeafCache,
}

impl Default for Evaluator {
    fn default() -> Self {
        Evaluator::new(DEFAULT_CHAR_BUDGET, 0)
    }
}

/// The shared evaluator behind the free functions of this module.
pub fn shared() -> &'static Evaluator {
    static SHARED: OnceLock<Evaluator> = OnceLock::new();
    SHARED.get_or_init(Evaluator::default)
}

impl Evaluator {
    /// `jobs == 1` evaluates sequentially; any other value uses the rayon pool.
    pub fn new(budget: u32, jobs: usize) -> Self {
        Evaluator {
            budget,
            jobs,
            leaves: LeafCache::default(),
        }
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub(crate) fn leaves(&self) -> &LeafCache {
        &self.leaves
    }

    pub fn models(&self, a: &Structure, phi: &Formula) -> Result<bool, EvalError> {
        Compiled::sentence(phi, a.vocab())?.eval(a, self, self.budget)
    }

    /// First structure (in enumeration order) with `2 <= n <= n_max` on
    /// which `pred` fails, or `None`.
    fn first_failure(
        &self,
        vocab: &Vocabulary,
        n_max: usize,
        pred: impl Fn(&Structure) -> Result<bool, EvalError> + Sync,
    ) -> Result<Option<Structure>, EvalError> {
        for n in 2..=n_max {
            let found = if self.jobs == 1 {
                structures_of_size(vocab, n)
                    .map(|a| pred(&a).map(|ok| (!ok).then_some(a)))
                    .find(|r| !matches!(r, Ok(None)))
            } else {
                let all: Vec<Structure> = structures_of_size(vocab, n).collect();
                all.into_par_iter()
                    .map(|a| pred(&a).map(|ok| (!ok).then_some(a)))
                    .find_first(|r| !matches!(r, Ok(None)))
            };
            if let Some(r) = found {
                return r;
            }
        }
        Ok(None)
    }

    /// Least structure with `n <= n_max` falsifying `phi`, if any.
    pub fn valid_upto(
        &self,
        phi: &Formula,
        vocab: &Vocabulary,
        n_max: usize,
    ) -> Result<Option<Structure>, EvalError> {
        let c = Compiled::sentence(phi, vocab)?;
        self.first_failure(vocab, n_max, |a| c.eval(a, self, self.budget))
    }

    /// Least structure with `n <= n_max` on which `phi` and `chi` disagree.
    pub fn mod_eq_upto(
        &self,
        phi: &Formula,
        chi: &Formula,
        vocab: &Vocabulary,
        n_max: usize,
    ) -> Result<Option<Structure>, EvalError> {
        let c1 = Compiled::sentence(phi, vocab)?;
        let c2 = Compiled::sentence(chi, vocab)?;
        self.first_failure(vocab, n_max, |a| {
            Ok(c1.eval(a, self, self.budget)? == c2.eval(a, self, self.budget)?)
        })
    }
}

pub fn models(a: &Structure, phi: &Formula) -> Result<bool, EvalError> {
    shared().models(a, phi)
}

pub fn valid_upto(
    phi: &Formula,
    vocab: &Vocabulary,
    n_max: usize,
) -> Result<Option<Structure>, EvalError> {
    shared().valid_upto(phi, vocab, n_max)
}

pub fn mod_eq_upto(
    phi: &Formula,
    chi: &Formula,
    vocab: &Vocabulary,
    n_max: usize,
) -> Result<Option<Structure>, EvalError> {
    shared().mod_eq_upto(phi, chi, vocab, n_max)
}
