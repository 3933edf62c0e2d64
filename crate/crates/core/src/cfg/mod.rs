//! Context-free grammars over single-character terminals.
//!
//! Text format, one line per left-hand side (lines may repeat):
//!
//! ```text
//! alphabet a b        # optional; defaults to the terminals used
//! S -> a S b | eps
//! ```
//!
//! Tokens starting with an uppercase letter are nonterminals, `eps` is the
//! empty string, and any other single character is a terminal. The first
//! left-hand side is the start symbol unless a `start S` line says otherwise.

mod cnf;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bits::{BitReader, Bits};
use crate::natcode::{read_nat, write_nat};
use crate::vocab::MAX_NAME_LEN;

pub use cnf::{cyk_member, find_missing, to_cnf, Cnf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GSym {
    T(usize),
    N(usize),
}

/// A grammar in canonical layout: terminals and nonterminals sorted, the
/// right-hand sides of each nonterminal sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grammar {
    terminals: Vec<char>,
    nonterminals: Vec<String>,
    start: usize,
    rules: Vec<Vec<Vec<GSym>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("the alphabet needs at least two symbols")]
    SmallAlphabet,
    #[error("terminal {0:?} is not in the alphabet")]
    UnknownTerminal(char),
    #[error("bad nonterminal name {0:?}")]
    BadName(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("malformed grammar code: {0}")]
    Malformed(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("symbol {0:?} is not in the grammar's alphabet")]
pub struct AlphabetMismatch(pub char);

/// Right-hand side with symbols referenced by name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Named {
    T(char),
    N(String),
}

fn valid_nonterminal(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_uppercase())
        && s.len() <= MAX_NAME_LEN
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn valid_terminal(c: char) -> bool {
    !c.is_whitespace() && !c.is_ascii_uppercase() && c != '|' && c != '#'
}

impl Grammar {
    /// Builds a grammar from named productions. `alphabet` may list terminals
    /// that no production uses.
    pub fn new(
        alphabet: impl IntoIterator<Item = char>,
        start: &str,
        productions: &[(String, Vec<Named>)],
    ) -> Result<Self, GrammarError> {
        let terminals: BTreeSet<char> = alphabet.into_iter().collect();
        let mut names: BTreeSet<String> = BTreeSet::new();
        names.insert(start.to_string());
        for (lhs, rhs) in productions {
            names.insert(lhs.clone());
            for s in rhs {
                match s {
                    Named::N(n) => {
                        names.insert(n.clone());
                    }
                    Named::T(c) if !terminals.contains(c) => {
                        return Err(GrammarError::UnknownTerminal(*c))
                    }
                    Named::T(_) => {}
                }
            }
        }
        if let Some(bad) = names.iter().find(|n| !valid_nonterminal(n)) {
            return Err(GrammarError::BadName(bad.clone()));
        }
        if let Some(&bad) = terminals.iter().find(|&&c| !valid_terminal(c)) {
            return Err(GrammarError::UnknownTerminal(bad));
        }
        if terminals.len() < 2 {
            return Err(GrammarError::SmallAlphabet);
        }
        let terminals: Vec<char> = terminals.into_iter().collect();
        let nonterminals: Vec<String> = names.into_iter().collect();
        let t_index: BTreeMap<char, usize> =
            terminals.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let n_index: BTreeMap<&str, usize> = nonterminals
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut rules: Vec<BTreeSet<Vec<GSym>>> = vec![BTreeSet::new(); nonterminals.len()];
        for (lhs, rhs) in productions {
            let body = rhs
                .iter()
                .map(|s| match s {
                    Named::T(c) => GSym::T(t_index[c]),
                    Named::N(n) => GSym::N(n_index[n.as_str()]),
                })
                .collect();
            rules[n_index[lhs.as_str()]].insert(body);
        }
        Ok(Grammar {
            start: n_index[start],
            rules: rules.into_iter().map(|r| r.into_iter().collect()).collect(),
            terminals,
            nonterminals,
        })
    }

    pub fn terminals(&self) -> &[char] {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Right-hand sides of nonterminal `a`.
    pub fn rules(&self, a: usize) -> &[Vec<GSym>] {
        &self.rules[a]
    }

    pub fn terminal_index(&self, c: char) -> Result<usize, AlphabetMismatch> {
        self.terminals
            .binary_search(&c)
            .map_err(|_| AlphabetMismatch(c))
    }

    /// Productions by name, start symbol's first.
    pub fn named_productions(&self) -> Vec<(String, Vec<Named>)> {
        let order = std::iter::once(self.start)
            .chain((0..self.nonterminals.len()).filter(|&a| a != self.start));
        let mut out = Vec::new();
        for a in order {
            for rhs in &self.rules[a] {
                out.push((
                    self.nonterminals[a].clone(),
                    rhs.iter().map(|&s| self.named(s)).collect(),
                ));
            }
        }
        out
    }

    fn named(&self, s: GSym) -> Named {
        match s {
            GSym::T(i) => Named::T(self.terminals[i]),
            GSym::N(i) => Named::N(self.nonterminals[i].clone()),
        }
    }

    pub fn is_cnf(&self) -> bool {
        self.rules.iter().enumerate().all(|(a, rs)| {
            rs.iter().all(|r| match r.as_slice() {
                [] => a == self.start,
                [GSym::T(_)] => true,
                [GSym::N(b), GSym::N(c)] => *b != self.start && *c != self.start,
                _ => false,
            })
        })
    }

    /// Self-delimiting code: the alphabet, the nonterminal names, the start
    /// symbol, then each nonterminal's right-hand sides.
    pub fn encode(&self) -> Bits {
        let mut out = Bits::new();
        write_nat(&mut out, self.terminals.len() as u64);
        for &c in &self.terminals {
            write_nat(&mut out, c as u64);
        }
        write_nat(&mut out, self.nonterminals.len() as u64);
        for name in &self.nonterminals {
            write_nat(&mut out, name.len() as u64);
            for b in name.bytes() {
                write_nat(&mut out, b as u64);
            }
        }
        write_nat(&mut out, self.start as u64);
        for rs in &self.rules {
            write_nat(&mut out, rs.len() as u64);
            for r in rs {
                write_nat(&mut out, r.len() as u64);
                for s in r {
                    write_nat(
                        &mut out,
                        match *s {
                            GSym::T(i) => 2 * i as u64,
                            GSym::N(i) => 2 * i as u64 + 1,
                        },
                    );
                }
            }
        }
        out
    }

    pub fn decode(bits: &Bits) -> Result<Self, GrammarError> {
        use GrammarError::Malformed;
        let mut r = BitReader::new(bits);
        let limit = bits.len() as u64;
        let mut nat = || read_nat(&mut r).map_err(|_| Malformed("bad integer"));
        let count = |nat: &mut dyn FnMut() -> Result<u64, GrammarError>| {
            let c = nat()?;
            if c > limit {
                return Err(Malformed("count exceeds code length"));
            }
            Ok(c as usize)
        };
        let nt = count(&mut nat)?;
        let mut alphabet = Vec::with_capacity(nt);
        for _ in 0..nt {
            let c = u32::try_from(nat()?)
                .ok()
                .and_then(char::from_u32)
                .ok_or(Malformed("bad terminal"))?;
            alphabet.push(c);
        }
        let nn = count(&mut nat)?;
        let mut names = Vec::with_capacity(nn);
        for _ in 0..nn {
            let len = count(&mut nat)?;
            let mut bytes = Vec::with_capacity(len);
            for _ in 0..len {
                bytes.push(u8::try_from(nat()?).map_err(|_| Malformed("bad name"))?);
            }
            names.push(String::from_utf8(bytes).map_err(|_| Malformed("bad name"))?);
        }
        let start = nat()? as usize;
        let start_name = names.get(start).ok_or(Malformed("bad start"))?.clone();
        let mut productions = Vec::new();
        for name in &names {
            for _ in 0..count(&mut nat)? {
                let len = count(&mut nat)?;
                let mut rhs = Vec::with_capacity(len);
                for _ in 0..len {
                    let s = nat()? as usize;
                    rhs.push(if s.is_multiple_of(2) {
                        Named::T(*alphabet.get(s / 2).ok_or(Malformed("bad terminal"))?)
                    } else {
                        Named::N(names.get(s / 2).ok_or(Malformed("bad symbol"))?.clone())
                    });
                }
                productions.push((name.clone(), rhs));
            }
        }
        if !r.is_at_end() {
            return Err(Malformed("trailing bits"));
        }
        let g = Grammar::new(alphabet, &start_name, &productions)?;
        if g.encode() != *bits {
            return Err(Malformed("not in canonical layout"));
        }
        Ok(g)
    }
}

impl FromStr for Grammar {
    type Err = GrammarError;

    fn from_str(text: &str) -> Result<Self, GrammarError> {
        let mut alphabet: Option<Vec<char>> = None;
        let mut used = BTreeSet::new();
        let mut start = None;
        let mut productions = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let err = |msg: &str| GrammarError::Syntax {
                line: i + 1,
                msg: msg.into(),
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("alphabet ") {
                let mut cs = Vec::new();
                for tok in rest.split_whitespace() {
                    let mut chars = tok.chars();
                    match (chars.next(), chars.next()) {
                        (Some(c), None) => cs.push(c),
                        _ => return Err(err("alphabet symbols are single characters")),
                    }
                }
                alphabet = Some(cs);
                continue;
            }
            if let Some(rest) = line.strip_prefix("start ") {
                start = Some(rest.trim().to_string());
                continue;
            }
            let (lhs, rhs) = line.split_once("->").ok_or_else(|| err("expected `->`"))?;
            let lhs = lhs.trim();
            if !valid_nonterminal(lhs) {
                return Err(err("left-hand side must be a nonterminal"));
            }
            start.get_or_insert_with(|| lhs.to_string());
            for alt in rhs.split('|') {
                let mut body = Vec::new();
                let toks: Vec<&str> = alt.split_whitespace().collect();
                if toks == ["eps"] {
                    productions.push((lhs.to_string(), body));
                    continue;
                }
                if toks.is_empty() {
                    return Err(err("empty alternative; write `eps`"));
                }
                for tok in toks {
                    if tok.starts_with(|c: char| c.is_ascii_uppercase()) {
                        body.push(Named::N(tok.to_string()));
                    } else {
                        let mut chars = tok.chars();
                        match (chars.next(), chars.next()) {
                            (Some(c), None) if valid_terminal(c) => {
                                used.insert(c);
                                body.push(Named::T(c));
                            }
                            _ => return Err(err(&format!("bad symbol {tok:?}"))),
                        }
                    }
                }
                productions.push((lhs.to_string(), body));
            }
        }
        let start = start.ok_or(GrammarError::Syntax {
            line: 0,
            msg: "no productions".into(),
        })?;
        let alphabet = alphabet.unwrap_or_else(|| used.into_iter().collect());
        Grammar::new(alphabet, &start, &productions)
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alphabet")?;
        for c in &self.terminals {
            write!(f, " {c}")?;
        }
        writeln!(f)?;
        let prods = self.named_productions();
        if prods
            .first()
            .is_none_or(|(lhs, _)| *lhs != self.nonterminals[self.start])
        {
            writeln!(f, "start {}", self.nonterminals[self.start])?;
        }
        let mut i = 0;
        while i < prods.len() {
            let lhs = &prods[i].0;
            let alts: Vec<String> = prods[i..]
                .iter()
                .take_while(|(l, _)| l == lhs)
                .map(|(_, rhs)| {
                    if rhs.is_empty() {
                        "eps".to_string()
                    } else {
                        rhs.iter()
                            .map(|s| match s {
                                Named::T(c) => c.to_string(),
                                Named::N(n) => n.clone(),
                            })
                            .collect::<Vec<_>>()
                            .join(" ")
                    }
                })
                .collect();
            i += alts.len();
            writeln!(f, "{lhs} -> {}", alts.join(" | "))?;
        }
        Ok(())
    }
}
