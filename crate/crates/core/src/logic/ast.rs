use std::collections::BTreeSet;

use crate::bits::Bits;

/// Reserved leaves standing for characteristic sentences. Payloads are the
/// serialized codes of their components; they are validated when the leaf is
/// built or parsed, and evaluated through the characteristic-set procedures.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharLeaf {
    /// Reduction check for ordered vocabularies: Γ, the machine, and the
    /// target sentence the machine must agree with.
    Ord {
        gamma: Bits,
        machine: Bits,
        target: Bits,
    },
    Unord {
        gamma: Bits,
        machine: Bits,
        target: Bits,
    },
    /// Complement of `Unord` with the same payload.
    CoUnord {
        gamma: Bits,
        machine: Bits,
        target: Bits,
    },
    NpConp {
        lambda: Bits,
        gamma: Bits,
    },
    Cfg {
        grammar: Bits,
    },
}

impl CharLeaf {
    pub fn keyword(&self) -> &'static str {
        match self {
            CharLeaf::Ord { .. } => "CHAR_ORD",
            CharLeaf::Unord { .. } => "CHAR_UNORD",
            CharLeaf::CoUnord { .. } => "COCHAR_UNORD",
            CharLeaf::NpConp { .. } => "CHAR_NPCONP",
            CharLeaf::Cfg { .. } => "CHAR_CFG",
        }
    }

    pub fn payloads(&self) -> Vec<&Bits> {
        match self {
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
            } => vec![gamma, machine, target],
            CharLeaf::NpConp { lambda, gamma } => vec![lambda, gamma],
            CharLeaf::Cfg { grammar } => vec![grammar],
        }
    }

    /// Rebuilds a leaf from its keyword and payloads, without validation.
    pub fn from_parts(keyword: &str, mut p: Vec<Bits>) -> Option<CharLeaf> {
        let arity = match keyword {
            "CHAR_ORD" | "CHAR_UNORD" | "COCHAR_UNORD" => 3,
            "CHAR_NPCONP" => 2,
            "CHAR_CFG" => 1,
            _ => return None,
        };
        if p.len() != arity {
            return None;
        }
        let mut next = || p.remove(0);
        Some(match keyword {
            "CHAR_ORD" => CharLeaf::Ord {
                gamma: next(),
                machine: next(),
                target: next(),
            },
            "CHAR_UNORD" => CharLeaf::Unord {
                gamma: next(),
                machine: next(),
                target: next(),
            },
            "COCHAR_UNORD" => CharLeaf::CoUnord {
                gamma: next(),
                machine: next(),
                target: next(),
            },
            "CHAR_NPCONP" => CharLeaf::NpConp {
                lambda: next(),
                gamma: next(),
            },
            _ => CharLeaf::Cfg { grammar: next() },
        })
    }
}

/// A fixpoint binding: relation variable `rel` over `vars`, defined by `body`,
/// applied to `args`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fixpoint {
    pub rel: String,
    pub vars: Vec<String>,
    pub body: Box<Formula>,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom {
        rel: String,
        args: Vec<String>,
    },
    Eq(String, String),
    Neq(String, String),
    Lt(String, String),
    Bit(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    ExistsSo {
        rel: String,
        arity: usize,
        body: Box<Formula>,
    },
    ForallSo {
        rel: String,
        arity: usize,
        body: Box<Formula>,
    },
    /// Reflexive-transitive closure of the relation `body(from, to)` on
    /// k-tuples, applied to `(src, dst)`.
    Tc {
        from: Vec<String>,
        to: Vec<String>,
        body: Box<Formula>,
        src: Vec<String>,
        dst: Vec<String>,
    },
    Lfp(Fixpoint),
    Pfp(Fixpoint),
    Char(CharLeaf),
}

pub fn atom(rel: &str, args: &[&str]) -> Formula {
    Formula::Atom {
        rel: rel.to_string(),
        args: args.iter().map(|s| s.to_string()).collect(),
    }
}

pub fn eq(a: &str, b: &str) -> Formula {
    Formula::Eq(a.into(), b.into())
}

pub fn neq(a: &str, b: &str) -> Formula {
    Formula::Neq(a.into(), b.into())
}

pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}

pub fn exists(x: &str, f: Formula) -> Formula {
    Formula::Exists(x.into(), Box::new(f))
}

pub fn forall(x: &str, f: Formula) -> Formula {
    Formula::Forall(x.into(), Box::new(f))
}

pub fn exists_so(rel: &str, arity: usize, f: Formula) -> Formula {
    Formula::ExistsSo {
        rel: rel.into(),
        arity,
        body: Box::new(f),
    }
}

pub fn forall_so(rel: &str, arity: usize, f: Formula) -> Formula {
    Formula::ForallSo {
        rel: rel.into(),
        arity,
        body: Box::new(f),
    }
}

impl Formula {
    /// Direct subformulas, in syntactic order.
    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            Atom { .. } | Eq(..) | Neq(..) | Lt(..) | Bit(..) | Char(_) => vec![],
            Not(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) => vec![a, b],
            Exists(_, a) | Forall(_, a) => vec![a],
            ExistsSo { body, .. } | ForallSo { body, .. } | Tc { body, .. } => vec![body],
            Lfp(fp) | Pfp(fp) => vec![&fp.body],
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut Formula> {
        use Formula::*;
        match self {
            Atom { .. } | Eq(..) | Neq(..) | Lt(..) | Bit(..) | Char(_) => vec![],
            Not(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) => vec![a, b],
            Exists(_, a) | Forall(_, a) => vec![a],
            ExistsSo { body, .. } | ForallSo { body, .. } | Tc { body, .. } => vec![body],
            Lfp(fp) | Pfp(fp) => vec![&mut fp.body],
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Pre-order traversal.
    pub fn nodes(&self) -> Vec<&Formula> {
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            out.push(f);
            for c in f.children() {
                walk(c, out);
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn contains_char(&self) -> bool {
        self.nodes().iter().any(|n| matches!(n, Formula::Char(_)))
    }

    /// Every first-order variable name occurring anywhere, bound or free.
    pub fn variable_names(&self) -> BTreeSet<String> {
        use Formula::*;
        let mut out = BTreeSet::new();
        for node in self.nodes() {
            match node {
                Atom { args, .. } => out.extend(args.iter().cloned()),
                Eq(a, b) | Neq(a, b) | Lt(a, b) | Bit(a, b) => {
                    out.insert(a.clone());
                    out.insert(b.clone());
                }
                Exists(x, _) | Forall(x, _) => {
                    out.insert(x.clone());
                }
                Tc {
                    from, to, src, dst, ..
                } => {
                    for v in [from, to, src, dst] {
                        out.extend(v.iter().cloned());
                    }
                }
                Lfp(fp) | Pfp(fp) => {
                    out.extend(fp.vars.iter().cloned());
                    out.extend(fp.args.iter().cloned());
                }
                _ => {}
            }
        }
        out
    }

    /// Names of relation variables bound by SO quantifiers or fixpoints.
    pub fn bound_relation_names(&self) -> BTreeSet<String> {
        use Formula::*;
        self.nodes()
            .into_iter()
            .filter_map(|n| match n {
                ExistsSo { rel, .. } | ForallSo { rel, .. } => Some(rel.clone()),
                Lfp(fp) | Pfp(fp) => Some(fp.rel.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        use Formula::*;
        match self {
            Atom { args, .. } => args.iter().cloned().collect(),
            Eq(a, b) | Neq(a, b) | Lt(a, b) | Bit(a, b) => [a.clone(), b.clone()].into(),
            Char(_) => BTreeSet::new(),
            Not(a) => a.free_variables(),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                let mut s = a.free_variables();
                s.extend(b.free_variables());
                s
            }
            Exists(x, a) | Forall(x, a) => {
                let mut s = a.free_variables();
                s.remove(x);
                s
            }
            ExistsSo { body, .. } | ForallSo { body, .. } => body.free_variables(),
            Tc {
                from,
                to,
                body,
                src,
                dst,
            } => {
                let mut s = body.free_variables();
                for v in from.iter().chain(to) {
                    s.remove(v);
                }
                s.extend(src.iter().cloned());
                s.extend(dst.iter().cloned());
                s
            }
            Lfp(fp) | Pfp(fp) => {
                let mut s = fp.body.free_variables();
                for v in &fp.vars {
                    s.remove(v);
                }
                s.extend(fp.args.iter().cloned());
                s
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }
}
