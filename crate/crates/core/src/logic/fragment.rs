//! Syntactic classification into the logics used by the canonical forms.

use std::fmt;

use super::ast::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fragment {
    Fo,
    FoTc,
    FoLfp,
    SoExists,
    SoForall,
    SoPfp,
    /// Not a sentence.
    Other,
}

impl Fragment {
    /// Inclusion between fragments: FO ⊂ FO(TC) ⊂ FO(LFP) ⊂ SO(PFP) and
    /// FO ⊂ SO∃, SO∀ ⊂ SO(PFP).
    pub fn within(self, other: Fragment) -> bool {
        use Fragment::*;
        match (self, other) {
            (Other, _) | (_, Other) => false,
            (a, b) if a == b => true,
            (Fo, _) => true,
            (FoTc, FoLfp) => true,
            (_, SoPfp) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fragment::Fo => "FO",
            Fragment::FoTc => "FO(TC)",
            Fragment::FoLfp => "FO(LFP)",
            Fragment::SoExists => "SO-exists",
            Fragment::SoForall => "SO-forall",
            Fragment::SoPfp => "SO(PFP)",
            Fragment::Other => "other",
        })
    }
}

fn has_so(f: &Formula) -> bool {
    f.nodes()
        .iter()
        .any(|n| matches!(n, Formula::ExistsSo { .. } | Formula::ForallSo { .. }))
}

fn has(f: &Formula, pred: fn(&Formula) -> bool) -> bool {
    f.nodes().into_iter().any(pred)
}

/// Least fragment containing `f`. Characteristic leaves are neutral: they
/// stand for sentences of whichever logic surrounds them.
pub fn fragment_of(f: &Formula) -> Fragment {
    if !f.is_sentence() {
        return Fragment::Other;
    }
    let tc = has(f, |n| matches!(n, Formula::Tc { .. }));
    let lfp = has(f, |n| matches!(n, Formula::Lfp(_)));
    let pfp = has(f, |n| matches!(n, Formula::Pfp(_)));
    if !has_so(f) {
        return match (tc, lfp, pfp) {
            (false, false, false) => Fragment::Fo,
            (true, false, false) => Fragment::FoTc,
            (_, true, false) => Fragment::FoLfp,
            _ => Fragment::SoPfp,
        };
    }
    if tc || lfp || pfp {
        return Fragment::SoPfp;
    }
    let prefix_kind = |existential: bool| {
        let mut cur = f;
        loop {
            match cur {
                Formula::ExistsSo { body, .. } if existential => cur = body,
                Formula::ForallSo { body, .. } if !existential => cur = body,
                _ => break,
            }
        }
        !has_so(cur)
    };
    match f {
        Formula::ExistsSo { .. } if prefix_kind(true) => Fragment::SoExists,
        Formula::ForallSo { .. } if prefix_kind(false) => Fragment::SoForall,
        _ => Fragment::SoPfp,
    }
}
