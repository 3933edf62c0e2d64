//! Canonical forms for complete problems and for NP ∩ coNP: builders,
//! recognizers and enumerators.
//!
//! Every form kind is a [`FormStrategy`] in a fixed registry. A [`FormSpec`]
//! fixes the kind, the complexity class, the target vocabulary and the
//! distinguished sentence, and validates components before assembly.

mod enumerate;
mod strategies;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::charsets::PayloadError;
use crate::logic::{
    apply_t_ord, apply_t_unord, check_sentence, fragment_of, Formula, Fragment, TransformError,
    WfError,
};
use crate::machine::{self, Machine};
use crate::vocab::Vocabulary;

pub use enumerate::{machines_of_len, sentences_of_len, LogicEnumerator};
pub use strategies::{registry, strategy, FormStrategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormKind {
    Ord2,
    Unord4,
    Ord5,
    Unord6,
    NpConp8,
}

impl FormKind {
    pub const ALL: [FormKind; 5] = [
        FormKind::Ord2,
        FormKind::Unord4,
        FormKind::Ord5,
        FormKind::Unord6,
        FormKind::NpConp8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormKind::Ord2 => "ord2",
            FormKind::Unord4 => "unord4",
            FormKind::Ord5 => "ord5",
            FormKind::Unord6 => "unord6",
            FormKind::NpConp8 => "npconp8",
        }
    }

    /// `Some(true)` for kinds over ordered vocabularies, `Some(false)` for
    /// unordered non-Aristotelian ones, `None` for any vocabulary.
    pub fn ordered(self) -> Option<bool> {
        match self {
            FormKind::Ord2 | FormKind::Ord5 => Some(true),
            FormKind::Unord4 | FormKind::Unord6 => Some(false),
            FormKind::NpConp8 => None,
        }
    }

    pub fn classes(self) -> &'static [Class] {
        use Class::*;
        match self.ordered() {
            Some(true) => &[Nl, P, CoNp, Np, Pspace],
            Some(false) => &[CoNp, Np, Pspace],
            None => &[NpConp],
        }
    }
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        FormKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown form kind {s:?}"))
    }
}

/// Complexity classes, each captured by a fragment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    Nl,
    P,
    CoNp,
    Np,
    Pspace,
    NpConp,
}

impl Class {
    pub const ALL: [Class; 6] = [
        Class::Nl,
        Class::P,
        Class::CoNp,
        Class::Np,
        Class::Pspace,
        Class::NpConp,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Class::Nl => "NL",
            Class::P => "P",
            Class::CoNp => "coNP",
            Class::Np => "NP",
            Class::Pspace => "PSPACE",
            Class::NpConp => "NPcoNP",
        }
    }

    pub fn fragment(self) -> Fragment {
        match self {
            Class::Nl => Fragment::FoTc,
            Class::P => Fragment::FoLfp,
            Class::CoNp => Fragment::SoForall,
            Class::Np | Class::NpConp => Fragment::SoExists,
            Class::Pspace => Fragment::SoPfp,
        }
    }

    /// Reductions for NL and P are logspace, the rest polynomial time.
    pub fn machine_kind(self) -> machine::Kind {
        match self {
            Class::Nl | Class::P => machine::Kind::Logspace,
            _ => machine::Kind::Polytime,
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Class {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Class::ALL
            .into_iter()
            .find(|c| c.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown class {s:?}"))
    }
}

/// The second component of a form: a machine or, for NP ∩ coNP, the
/// complementing sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extra {
    Machine(Machine),
    Lambda(Formula),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub gamma: Formula,
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub kind: FormKind,
    pub class: Class,
    pub tau: Vocabulary,
    pub components: Components,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("{kind} does not support class {class}")]
    UnsupportedClass { kind: FormKind, class: Class },
    #[error("sentence is {found}, outside the class fragment {expected}")]
    FragmentMismatch { found: Fragment, expected: Fragment },
    #[error("component sentences must not contain characteristic leaves")]
    PayloadNotCharFree,
    #[error("the target vocabulary has no symbol of arity above 1")]
    AristotelianTarget,
    #[error("the target vocabulary has no order")]
    NoOrderInTarget,
    #[error("the target vocabulary must not contain an order")]
    OrderInTarget,
    #[error("{0} needs a distinguished sentence")]
    MissingUpsilon(FormKind),
    #[error("distinguished sentence: {0}")]
    Upsilon(TransformError),
    #[error(transparent)]
    IllFormed(#[from] WfError),
    #[error("the class needs a {expected} machine, got {found}")]
    MachineKind {
        expected: machine::Kind,
        found: machine::Kind,
    },
    #[error("{0} takes a machine")]
    ExpectedMachine(FormKind),
    #[error("{0} takes a complementing sentence")]
    ExpectedLambda(FormKind),
    #[error(transparent)]
    Payload(#[from] PayloadError),
}

/// A kind, class, target vocabulary and distinguished sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormSpec {
    kind: FormKind,
    class: Class,
    tau: Vocabulary,
    /// The distinguished sentence moved to `tau`.
    upsilon_tau: Option<Formula>,
}

impl FormSpec {
    /// `upsilon` is the distinguished sentence over `{R¹, <}` (ordered kinds)
    /// or `{R²}` (unordered kinds); the NP ∩ coNP form takes none.
    pub fn new(
        kind: FormKind,
        class: Class,
        tau: &Vocabulary,
        upsilon: Option<&Formula>,
    ) -> Result<Self, FormError> {
        if !kind.classes().contains(&class) {
            return Err(FormError::UnsupportedClass { kind, class });
        }
        let upsilon_tau = match kind.ordered() {
            None => None,
            Some(ordered) => {
                if ordered && !tau.has_order() {
                    return Err(FormError::NoOrderInTarget);
                }
                if !ordered && tau.has_order() {
                    return Err(FormError::OrderInTarget);
                }
                if !ordered && tau.is_aristotelian() {
                    return Err(FormError::AristotelianTarget);
                }
                let u = upsilon.ok_or(FormError::MissingUpsilon(kind))?;
                let t = if ordered {
                    apply_t_ord(u, tau)
                } else {
                    apply_t_unord(u, tau)
                };
                Some(t.map_err(|e| match e {
                    TransformError::CharInSource => FormError::PayloadNotCharFree,
                    TransformError::AristotelianTarget => FormError::AristotelianTarget,
                    e => FormError::Upsilon(e),
                })?)
            }
        };
        Ok(FormSpec {
            kind,
            class,
            tau: tau.clone(),
            upsilon_tau,
        })
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn class(&self) -> Class {
        self.class
    }

    pub fn tau(&self) -> &Vocabulary {
        &self.tau
    }

    /// The distinguished sentence over the target vocabulary.
    pub fn upsilon_tau(&self) -> Option<&Formula> {
        self.upsilon_tau.as_ref()
    }

    fn check_component(&self, f: &Formula) -> Result<(), FormError> {
        if f.contains_char() {
            return Err(FormError::PayloadNotCharFree);
        }
        check_sentence(f, &self.tau)?;
        let found = fragment_of(f);
        let expected = self.class.fragment();
        if !found.within(expected) {
            return Err(FormError::FragmentMismatch { found, expected });
        }
        Ok(())
    }

    pub fn build(&self, gamma: &Formula, extra: &Extra) -> Result<CanonicalForm, FormError> {
        self.check_component(gamma)?;
        match (self.kind, extra) {
            (FormKind::NpConp8, Extra::Lambda(l)) => self.check_component(l)?,
            (FormKind::NpConp8, Extra::Machine(_)) => {
                return Err(FormError::ExpectedLambda(self.kind))
            }
            (_, Extra::Lambda(_)) => return Err(FormError::ExpectedMachine(self.kind)),
            (_, Extra::Machine(t)) => {
                let expected = self.class.machine_kind();
                if t.kind() != expected {
                    return Err(FormError::MachineKind {
                        expected,
                        found: t.kind(),
                    });
                }
            }
        }
        let formula = strategy(self.kind).assemble(self, gamma, extra)?;
        Ok(CanonicalForm {
            kind: self.kind,
            class: self.class,
            tau: self.tau.clone(),
            components: Components {
                gamma: gamma.clone(),
                extra: extra.clone(),
            },
            formula,
        })
    }

    /// Components of `phi` if it is a form of this spec, rebuilt and
    /// compared node for node.
    pub fn recognize(&self, phi: &Formula) -> Option<Components> {
        let candidate = strategy(self.kind).extract(phi)?;
        let built = self.build(&candidate.gamma, &candidate.extra).ok()?;
        (built.formula == *phi).then_some(candidate)
    }

    /// All forms of this spec, ordered by total component code length.
    pub fn enumerate(&self) -> LogicEnumerator {
        LogicEnumerator::new(self.clone())
    }
}

pub fn build_form(
    kind: FormKind,
    class: Class,
    gamma: &Formula,
    extra: &Extra,
    tau: &Vocabulary,
    upsilon: Option<&Formula>,
) -> Result<CanonicalForm, FormError> {
    FormSpec::new(kind, class, tau, upsilon)?.build(gamma, extra)
}

pub fn recognize(
    kind: FormKind,
    class: Class,
    phi: &Formula,
    tau: &Vocabulary,
    upsilon: Option<&Formula>,
) -> Option<Components> {
    FormSpec::new(kind, class, tau, upsilon)
        .ok()?
        .recognize(phi)
}

/// The first `budget` forms of the logic.
pub fn enumerate_logic(
    kind: FormKind,
    class: Class,
    tau: &Vocabulary,
    upsilon: Option<&Formula>,
    budget: usize,
) -> Result<Vec<CanonicalForm>, FormError> {
    Ok(FormSpec::new(kind, class, tau, upsilon)?
        .enumerate()
        .take(budget)
        .collect())
}
