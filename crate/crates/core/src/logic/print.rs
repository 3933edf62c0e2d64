//! ASCII rendering. Binary connectives are always parenthesized, so the parser
//! reads the output back to the same tree.

use std::fmt;

use itertools::Itertools;

use super::ast::{CharLeaf, Formula};

impl fmt::Display for CharLeaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.keyword())?;
        for (i, p) in self.payloads().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}:{}", p.len(), p.to_hex())?;
        }
        f.write_str("}")
    }
}

fn is_infix_atom(f: &Formula) -> bool {
    matches!(f, Formula::Eq(..) | Formula::Neq(..) | Formula::Lt(..))
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            Atom { rel, args } => write!(f, "{rel}({})", args.join(",")),
            Eq(a, b) => write!(f, "{a} = {b}"),
            Neq(a, b) => write!(f, "{a} != {b}"),
            Lt(a, b) => write!(f, "{a} < {b}"),
            Bit(a, b) => write!(f, "BIT({a},{b})"),
            Not(a) if is_infix_atom(a) => write!(f, "~({a})"),
            Not(a) => write!(f, "~{a}"),
            And(a, b) => write!(f, "({a} & {b})"),
            Or(a, b) => write!(f, "({a} | {b})"),
            Implies(a, b) => write!(f, "({a} -> {b})"),
            Exists(x, a) => write!(f, "E{x} {a}"),
            Forall(x, a) => write!(f, "A{x} {a}"),
            ExistsSo { rel, arity, body } => write!(f, "E{rel}:{arity} {body}"),
            ForallSo { rel, arity, body } => write!(f, "A{rel}:{arity} {body}"),
            Tc {
                from,
                to,
                body,
                src,
                dst,
            } => write!(
                f,
                "TC[{}: {body}]({})",
                from.iter().chain(to).join(","),
                src.iter().chain(dst).join(",")
            ),
            Lfp(fp) | Pfp(fp) => write!(
                f,
                "{}[{},{}: {}]({})",
                if matches!(self, Lfp(_)) { "LFP" } else { "PFP" },
                fp.rel,
                fp.vars.join(","),
                fp.body,
                fp.args.join(",")
            ),
            Char(leaf) => write!(f, "{leaf}"),
        }
    }
}
