//! Characteristic sets and the reserved leaves that stand for them.
//!
//! Each set is defined by a condition that must hold for every object up to
//! a size bound, where the bound is an iterated binary length of the input
//! structure's encoding. Checking therefore proceeds size by size, and the
//! verdict for a structure depends only on its encoding length.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::bits::Bits;
use crate::cfg::{Cnf, Grammar, GrammarError};
use crate::eval::{self, Compiled, EvalError, Evaluator};
use crate::logic::{godel_decode, godel_encode, CharLeaf, Formula, GodelError};
use crate::machine::{self, decode_tm, encode_tm, Machine, MachineError, RunLimits};
use crate::natcode::ell;
use crate::structure::{structures_of_size, Structure};
use crate::vocab::Vocabulary;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PayloadError {
    #[error("sentence payload: {0}")]
    Formula(#[from] GodelError),
    #[error("payload sentences must not contain characteristic leaves")]
    PayloadNotCharFree,
    #[error("payload formula has free variables")]
    NotSentence,
    #[error("machine payload: {0}")]
    Machine(#[from] MachineError),
    #[error("grammar payload: {0}")]
    Grammar(#[from] GrammarError),
}

/// The four families of characteristic sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetKind {
    Ord,
    Unord,
    NpConp,
    Cfg,
}

impl SetKind {
    pub const ALL: [SetKind; 4] = [SetKind::Ord, SetKind::Unord, SetKind::NpConp, SetKind::Cfg];

    pub fn name(self) -> &'static str {
        match self {
            SetKind::Ord => "ord",
            SetKind::Unord => "unord",
            SetKind::NpConp => "npconp",
            SetKind::Cfg => "cfg",
        }
    }

    pub fn from_name(name: &str) -> Option<SetKind> {
        SetKind::ALL.into_iter().find(|k| k.name() == name)
    }

    /// How many times the binary length is iterated to get the size bound.
    pub fn log_depth(self) -> u32 {
        match self {
            SetKind::Ord | SetKind::Cfg => 3,
            SetKind::Unord | SetKind::NpConp => 2,
        }
    }

    pub fn of_leaf(leaf: &CharLeaf) -> SetKind {
        match leaf {
            CharLeaf::Ord { .. } => SetKind::Ord,
            CharLeaf::Unord { .. } | CharLeaf::CoUnord { .. } => SetKind::Unord,
            CharLeaf::NpConp { .. } => SetKind::NpConp,
            CharLeaf::Cfg { .. } => SetKind::Cfg,
        }
    }
}

impl fmt::Display for SetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Size bound for an input whose encoding has `encoding_len` bits.
pub fn size_bound(kind: SetKind, encoding_len: usize) -> u64 {
    ell(encoding_len as u64, kind.log_depth()).unwrap_or(0)
}

/// A set whose defining condition is checked one size at a time.
pub trait CharacteristicSet: Send + Sync {
    fn kind(&self) -> SetKind;

    /// Smallest size the condition ranges over.
    fn first_size(&self) -> usize {
        2
    }

    /// Whether the condition holds for every object of exactly this size.
    fn holds_at(&self, size: usize, ev: &Evaluator, budget: u32) -> Result<bool, EvalError>;

    /// Whether the condition holds for all sizes up to `bound`.
    fn holds_upto(&self, bound: u64, ev: &Evaluator, budget: u32) -> Result<bool, EvalError> {
        for size in self.first_size()..=usize::try_from(bound).unwrap_or(usize::MAX) {
            if !self.holds_at(size, ev, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Machine `t` with oracle `gamma` agrees with `target` on every structure.
pub struct ReductionSet {
    kind: SetKind,
    vocab: Vocabulary,
    gamma: Compiled,
    machine: Machine,
    target: Compiled,
}

impl ReductionSet {
    pub fn new(
        kind: SetKind,
        vocab: &Vocabulary,
        gamma: &Formula,
        machine: Machine,
        target: &Formula,
    ) -> Result<Self, EvalError> {
        Ok(ReductionSet {
            kind,
            vocab: vocab.clone(),
            gamma: Compiled::sentence(gamma, vocab)?,
            machine,
            target: Compiled::sentence(target, vocab)?,
        })
    }
}

impl CharacteristicSet for ReductionSet {
    fn kind(&self) -> SetKind {
        self.kind
    }

    fn holds_at(&self, size: usize, ev: &Evaluator, budget: u32) -> Result<bool, EvalError> {
        let mut oracle = |q: &Bits| match Structure::decode_bin(self.vocab.clone(), q) {
            Ok(b) => self.gamma.eval(&b, ev, budget),
            Err(_) => Ok(false),
        };
        for b in structures_of_size(&self.vocab, size) {
            let accepted = machine::run_with_oracle(
                &self.machine,
                &b.encode_bin(),
                &mut oracle,
                RunLimits::default(),
            )?
            .accepted();
            if accepted != self.target.eval(&b, ev, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `lambda` holds exactly where `gamma` fails.
pub struct ComplementSet {
    vocab: Vocabulary,
    lambda: Compiled,
    gamma: Compiled,
}

impl ComplementSet {
    pub fn new(vocab: &Vocabulary, lambda: &Formula, gamma: &Formula) -> Result<Self, EvalError> {
        Ok(ComplementSet {
            vocab: vocab.clone(),
            lambda: Compiled::sentence(lambda, vocab)?,
            gamma: Compiled::sentence(gamma, vocab)?,
        })
    }
}

impl CharacteristicSet for ComplementSet {
    fn kind(&self) -> SetKind {
        SetKind::NpConp
    }

    fn holds_at(&self, size: usize, ev: &Evaluator, budget: u32) -> Result<bool, EvalError> {
        for b in structures_of_size(&self.vocab, size) {
            if self.lambda.eval(&b, ev, budget)? == self.gamma.eval(&b, ev, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The grammar generates every word; sizes are word lengths.
pub struct GrammarSet {
    cnf: Cnf,
}

impl GrammarSet {
    pub fn new(g: &Grammar) -> Self {
        GrammarSet { cnf: Cnf::new(g) }
    }
}

impl CharacteristicSet for GrammarSet {
    fn kind(&self) -> SetKind {
        SetKind::Cfg
    }

    fn first_size(&self) -> usize {
        0
    }

    fn holds_at(&self, size: usize, _: &Evaluator, _: u32) -> Result<bool, EvalError> {
        let k = self.cnf.grammar().terminals().len();
        let mut word = vec![0usize; size];
        loop {
            if !self.cnf.member_indices(&word) {
                return Ok(false);
            }
            let Some(i) = word.iter().rposition(|&t| t + 1 < k) else {
                return Ok(true);
            };
            word[i] += 1;
            word[i + 1..].fill(0);
        }
    }

    fn holds_upto(&self, bound: u64, _: &Evaluator, _: u32) -> Result<bool, EvalError> {
        let len = usize::try_from(bound).unwrap_or(usize::MAX);
        Ok(self.cnf.find_missing(len).is_none())
    }
}

fn sentence_payload(bits: &Bits) -> Result<Formula, PayloadError> {
    let f = godel_decode(bits)?;
    if f.contains_char() {
        return Err(PayloadError::PayloadNotCharFree);
    }
    if !f.is_sentence() {
        return Err(PayloadError::NotSentence);
    }
    Ok(f)
}

enum Decoded {
    Reduction(Formula, Machine, Formula),
    Complement(Formula, Formula),
    Grammar(Grammar),
}

fn decode_leaf(leaf: &CharLeaf) -> Result<Decoded, PayloadError> {
    Ok(match leaf {
        CharLeaf::Ord {
            gamma,
            machine,
            target,
        }
        | CharLeaf::Unord {
            gamma,
            machine,
            target,
        }
        | CharLeaf::CoUnord {
            gamma,
            machine,
            target,
        } => Decoded::Reduction(
            sentence_payload(gamma)?,
            decode_tm(machine)?,
            sentence_payload(target)?,
        ),
        CharLeaf::NpConp { lambda, gamma } => {
            Decoded::Complement(sentence_payload(lambda)?, sentence_payload(gamma)?)
        }
        CharLeaf::Cfg { grammar } => Decoded::Grammar(Grammar::decode(grammar)?),
    })
}

/// Checks that every payload of `leaf` decodes: sentences without leaves, a
/// machine, or a grammar.
pub fn validate_leaf(leaf: &CharLeaf) -> Result<(), PayloadError> {
    decode_leaf(leaf).map(|_| ())
}

/// Builds the set a leaf stands for, over structures of `vocab`.
pub fn prepare(
    leaf: &CharLeaf,
    vocab: &Vocabulary,
) -> Result<Box<dyn CharacteristicSet>, EvalError> {
    let kind = SetKind::of_leaf(leaf);
    Ok(
        match decode_leaf(leaf).map_err(|e| EvalError::Payload(e.to_string()))? {
            Decoded::Reduction(g, t, u) => Box::new(ReductionSet::new(kind, vocab, &g, t, &u)?),
            Decoded::Complement(l, g) => Box::new(ComplementSet::new(vocab, &l, &g)?),
            Decoded::Grammar(g) => Box::new(GrammarSet::new(&g)),
        },
    )
}

struct Progress {
    /// Every size below this has been checked.
    next: usize,
    /// Least size at which the condition fails, once found.
    violation: Option<usize>,
}

struct LeafEntry {
    set: Box<dyn CharacteristicSet>,
    progress: Mutex<Progress>,
}

impl LeafEntry {
    fn holds_upto(&self, bound: u64, ev: &Evaluator, budget: u32) -> Result<bool, EvalError> {
        let bound = usize::try_from(bound).unwrap_or(usize::MAX);
        let mut p = self.progress.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(v) = p.violation {
            return Ok(v > bound);
        }
        while p.next <= bound {
            if !self.set.holds_at(p.next, ev, budget)? {
                p.violation = Some(p.next);
                return Ok(false);
            }
            p.next += 1;
        }
        Ok(true)
    }
}

/// Memo of prepared sets and how far each has been checked, keyed by leaf and
/// vocabulary. Complementary leaves share an entry.
#[derive(Default)]
pub struct LeafCache {
    entries: Mutex<HashMap<(CharLeaf, Vocabulary), Arc<LeafEntry>>>,
}

impl fmt::Debug for LeafCache {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.entries.lock().map(|e| e.len()).unwrap_or(0);
        f.debug_struct("LeafCache").field("entries", &n).finish()
    }
}

impl LeafCache {
    fn entry(&self, leaf: &CharLeaf, vocab: &Vocabulary) -> Result<Arc<LeafEntry>, EvalError> {
        let key_leaf = match leaf {
            CharLeaf::CoUnord {
                gamma,
                machine,
                target,
            } => CharLeaf::Unord {
                gamma: gamma.clone(),
                machine: machine.clone(),
                target: target.clone(),
            },
            l => l.clone(),
        };
        let key = (key_leaf, vocab.clone());
        if let Some(e) = self
            .entries
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .get(&key)
        {
            return Ok(e.clone());
        }
        let set = prepare(leaf, vocab)?;
        let first = set.first_size();
        let entry = Arc::new(LeafEntry {
            set,
            progress: Mutex::new(Progress {
                next: first,
                violation: None,
            }),
        });
        let mut map = self.entries.lock().unwrap_or_else(|e| e.into_inner());
        Ok(map.entry(key).or_insert(entry).clone())
    }
}

/// Truth value of `leaf` in a structure over `vocab` whose encoding has
/// `encoding_len` bits.
pub(crate) fn leaf_holds(
    ev: &Evaluator,
    leaf: &CharLeaf,
    vocab: &Vocabulary,
    encoding_len: usize,
    budget: u32,
) -> Result<bool, EvalError> {
    let entry = ev.leaves().entry(leaf, vocab)?;
    let bound = size_bound(SetKind::of_leaf(leaf), encoding_len);
    let v = entry.holds_upto(bound, ev, budget)?;
    Ok(if matches!(leaf, CharLeaf::CoUnord { .. }) {
        !v
    } else {
        v
    })
}

fn member(set: &dyn CharacteristicSet, a: &Structure) -> Result<bool, EvalError> {
    let ev = eval::shared();
    set.holds_upto(
        size_bound(set.kind(), a.encode_bin().len()),
        ev,
        ev.budget(),
    )
}

/// Membership in the ordered reduction set of `(gamma, t)` against `target`.
pub fn member_s_ord(
    a: &Structure,
    gamma: &Formula,
    t: &Machine,
    target: &Formula,
) -> Result<bool, EvalError> {
    member(
        &ReductionSet::new(SetKind::Ord, a.vocab(), gamma, t.clone(), target)?,
        a,
    )
}

/// As [`member_s_ord`] with the shallower size bound.
pub fn member_s_unord(
    a: &Structure,
    gamma: &Formula,
    t: &Machine,
    target: &Formula,
) -> Result<bool, EvalError> {
    member(
        &ReductionSet::new(SetKind::Unord, a.vocab(), gamma, t.clone(), target)?,
        a,
    )
}

pub fn member_s_npconp(
    a: &Structure,
    lambda: &Formula,
    gamma: &Formula,
) -> Result<bool, EvalError> {
    member(&ComplementSet::new(a.vocab(), lambda, gamma)?, a)
}

pub fn member_s_cfg(a: &Structure, g: &Grammar) -> bool {
    let bound = size_bound(SetKind::Cfg, a.encode_bin().len());
    Cnf::new(g)
        .find_missing(usize::try_from(bound).unwrap_or(usize::MAX))
        .is_none()
}

fn sentence_code(f: &Formula) -> Result<Bits, PayloadError> {
    if f.contains_char() {
        return Err(PayloadError::PayloadNotCharFree);
    }
    if !f.is_sentence() {
        return Err(PayloadError::NotSentence);
    }
    Ok(godel_encode(f))
}

/// The leaf for the ordered reduction set.
pub fn char_ord(gamma: &Formula, t: &Machine, target: &Formula) -> Result<Formula, PayloadError> {
    Ok(Formula::Char(CharLeaf::Ord {
        gamma: sentence_code(gamma)?,
        machine: encode_tm(t),
        target: sentence_code(target)?,
    }))
}

pub fn char_unord(gamma: &Formula, t: &Machine, target: &Formula) -> Result<Formula, PayloadError> {
    Ok(Formula::Char(CharLeaf::Unord {
        gamma: sentence_code(gamma)?,
        machine: encode_tm(t),
        target: sentence_code(target)?,
    }))
}

/// The complement of [`char_unord`] with the same payloads.
pub fn cochar_unord(
    gamma: &Formula,
    t: &Machine,
    target: &Formula,
) -> Result<Formula, PayloadError> {
    Ok(Formula::Char(CharLeaf::CoUnord {
        gamma: sentence_code(gamma)?,
        machine: encode_tm(t),
        target: sentence_code(target)?,
    }))
}

pub fn char_npconp(lambda: &Formula, gamma: &Formula) -> Result<Formula, PayloadError> {
    Ok(Formula::Char(CharLeaf::NpConp {
        lambda: sentence_code(lambda)?,
        gamma: sentence_code(gamma)?,
    }))
}

pub fn char_cfg(g: &Grammar) -> Formula {
    Formula::Char(CharLeaf::Cfg {
        grammar: g.encode(),
    })
}
