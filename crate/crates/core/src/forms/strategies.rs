use super::{Components, Extra, FormError, FormKind, FormSpec};
use crate::charsets::{char_npconp, char_ord, char_unord, cochar_unord};
use crate::logic::{godel_decode, godel_encode, psi_encode, psi_recognize, CharLeaf, Formula};
use crate::machine::{decode_tm, encode_tm, Machine};

/// Assembly and shape matching for one kind of form. Validation of the
/// components is shared and lives in [`FormSpec`].
pub trait FormStrategy: Send + Sync {
    fn kind(&self) -> FormKind;

    fn assemble(
        &self,
        spec: &FormSpec,
        gamma: &Formula,
        extra: &Extra,
    ) -> Result<Formula, FormError>;

    /// Candidate components read off the shape of `phi`, not yet checked.
    fn extract(&self, phi: &Formula) -> Option<Components>;
}

fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}

fn machine_of(kind: FormKind, extra: &Extra) -> Result<&Machine, FormError> {
    match extra {
        Extra::Machine(t) => Ok(t),
        Extra::Lambda(_) => Err(FormError::ExpectedMachine(kind)),
    }
}

fn upsilon(spec: &FormSpec) -> Result<Formula, FormError> {
    spec.upsilon_tau()
        .cloned()
        .ok_or(FormError::MissingUpsilon(spec.kind()))
}

fn psi_of(w: &crate::bits::Bits) -> Formula {
    psi_encode(w).expect("codes are never empty")
}

/// `(A ∧ Γ) ∨ (B ∧ Υ)`, returning `(A, Γ, B, Υ)`.
fn split_two(phi: &Formula) -> Option<(&Formula, &Formula, &Formula, &Formula)> {
    let Formula::Or(l, r) = phi else { return None };
    let (Formula::And(a, g), Formula::And(b, u)) = (&**l, &**r) else {
        return None;
    };
    Some((a, g, b, u))
}

fn leaf_machine(f: &Formula) -> Option<Machine> {
    match f {
        Formula::Char(
            CharLeaf::Ord { machine, .. }
            | CharLeaf::Unord { machine, .. }
            | CharLeaf::CoUnord { machine, .. },
        ) => decode_tm(machine).ok(),
        _ => None,
    }
}

/// Ordered forms: `(γ ∧ Γ) ∨ (¬γ ∧ Υ)`, optionally followed by `∨ ψ⟨T⟩`.
struct Ordered {
    psi: bool,
}

/// Unordered forms: `(Θ ∧ Γ) ∨ (Θ̄ ∧ Υ)`, optionally followed by `∨ ψ⟨T⟩`.
struct Unordered {
    psi: bool,
}

/// `(Θ ∧ Γ) ∨ ψ⟨Λ⟩`.
struct Complement;

impl FormStrategy for Ordered {
    fn kind(&self) -> FormKind {
        if self.psi {
            FormKind::Ord5
        } else {
            FormKind::Ord2
        }
    }

    fn assemble(
        &self,
        spec: &FormSpec,
        gamma: &Formula,
        extra: &Extra,
    ) -> Result<Formula, FormError> {
        let t = machine_of(self.kind(), extra)?;
        let u = upsilon(spec)?;
        let c = char_ord(gamma, t, &u)?;
        let body = or(
            and(c.clone(), gamma.clone()),
            and(Formula::Not(Box::new(c)), u),
        );
        Ok(if self.psi {
            or(body, psi_of(&encode_tm(t)))
        } else {
            body
        })
    }

    fn extract(&self, phi: &Formula) -> Option<Components> {
        let (body, machine) = if self.psi {
            let Formula::Or(body, psi) = phi else {
                return None;
            };
            (&**body, decode_tm(&psi_recognize(psi)?).ok()?)
        } else {
            (phi, leaf_machine(split_two(phi)?.0)?)
        };
        let (_, gamma, _, _) = split_two(body)?;
        Some(Components {
            gamma: gamma.clone(),
            extra: Extra::Machine(machine),
        })
    }
}

impl FormStrategy for Unordered {
    fn kind(&self) -> FormKind {
        if self.psi {
            FormKind::Unord6
        } else {
            FormKind::Unord4
        }
    }

    fn assemble(
        &self,
        spec: &FormSpec,
        gamma: &Formula,
        extra: &Extra,
    ) -> Result<Formula, FormError> {
        let t = machine_of(self.kind(), extra)?;
        let u = upsilon(spec)?;
        let body = or(
            and(char_unord(gamma, t, &u)?, gamma.clone()),
            and(cochar_unord(gamma, t, &u)?, u),
        );
        Ok(if self.psi {
            or(body, psi_of(&encode_tm(t)))
        } else {
            body
        })
    }

    fn extract(&self, phi: &Formula) -> Option<Components> {
        let (body, machine) = if self.psi {
            let Formula::Or(body, psi) = phi else {
                return None;
            };
            (&**body, decode_tm(&psi_recognize(psi)?).ok()?)
        } else {
            (phi, leaf_machine(split_two(phi)?.0)?)
        };
        let (_, gamma, _, _) = split_two(body)?;
        Some(Components {
            gamma: gamma.clone(),
            extra: Extra::Machine(machine),
        })
    }
}

impl FormStrategy for Complement {
    fn kind(&self) -> FormKind {
        FormKind::NpConp8
    }

    fn assemble(&self, _: &FormSpec, gamma: &Formula, extra: &Extra) -> Result<Formula, FormError> {
        let Extra::Lambda(lambda) = extra else {
            return Err(FormError::ExpectedLambda(self.kind()));
        };
        Ok(or(
            and(char_npconp(lambda, gamma)?, gamma.clone()),
            psi_of(&godel_encode(lambda)),
        ))
    }

    fn extract(&self, phi: &Formula) -> Option<Components> {
        let Formula::Or(l, psi) = phi else {
            return None;
        };
        let Formula::And(_, gamma) = &**l else {
            return None;
        };
        let lambda = godel_decode(&psi_recognize(psi)?).ok()?;
        Some(Components {
            gamma: (**gamma).clone(),
            extra: Extra::Lambda(lambda),
        })
    }
}

static ORD2: Ordered = Ordered { psi: false };
static ORD5: Ordered = Ordered { psi: true };
static UNORD4: Unordered = Unordered { psi: false };
static UNORD6: Unordered = Unordered { psi: true };
static NPCONP8: Complement = Complement;

static REGISTRY: [&dyn FormStrategy; 5] = [&ORD2, &UNORD4, &ORD5, &UNORD6, &NPCONP8];

pub fn registry() -> &'static [&'static dyn FormStrategy] {
    &REGISTRY
}

pub fn strategy(kind: FormKind) -> &'static dyn FormStrategy {
    *REGISTRY
        .iter()
        .find(|s| s.kind() == kind)
        .expect("every kind is registered")
}
