use std::fmt;

use crate::structure::StructureError;

/// Names that the sentence syntax reserves for its own constructs.
pub const RESERVED_NAMES: &[&str] = &[
    "BIT",
    "TC",
    "LFP",
    "PFP",
    "CHAR_ORD",
    "CHAR_UNORD",
    "COCHAR_UNORD",
    "CHAR_NPCONP",
    "CHAR_CFG",
];

/// Widest relation accepted anywhere: symbols, relation variables, atoms.
pub const MAX_ARITY: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// A finite relational signature. The order symbol `<` is a flag: it is always
/// the natural order on the universe and never stored or encoded.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vocabulary {
    symbols: Vec<Symbol>,
    has_order: bool,
}

/// Longest accepted identifier, in bytes.
pub const MAX_NAME_LEN: usize = 64;

/// Relation names are capitalized identifiers: `[A-Z][A-Za-z0-9_]*`.
pub fn is_relation_name(s: &str) -> bool {
    let mut chars = s.chars();
    s.len() <= MAX_NAME_LEN
        && matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// First-order variable names: `[a-z][a-z0-9_]*`.
pub fn is_variable_name(s: &str) -> bool {
    let mut chars = s.chars();
    s.len() <= MAX_NAME_LEN
        && matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl Vocabulary {
    pub fn new<S: Into<String>>(
        symbols: impl IntoIterator<Item = (S, usize)>,
        has_order: bool,
    ) -> Result<Self, StructureError> {
        let symbols: Vec<Symbol> = symbols
            .into_iter()
            .map(|(name, arity)| Symbol {
                name: name.into(),
                arity,
            })
            .collect();
        if symbols.is_empty() {
            return Err(StructureError::EmptyVocabulary);
        }
        for (i, s) in symbols.iter().enumerate() {
            if !is_relation_name(&s.name) || RESERVED_NAMES.contains(&s.name.as_str()) {
                return Err(StructureError::InvalidName(s.name.clone()));
            }
            if s.arity == 0 || s.arity > MAX_ARITY {
                return Err(StructureError::ZeroArity(s.name.clone()));
            }
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(StructureError::DuplicateSymbol(s.name.clone()));
            }
        }
        Ok(Vocabulary { symbols, has_order })
    }

    /// The base ordered vocabulary `{R¹, <}`.
    pub fn sigma_ordered() -> Self {
        Vocabulary::new([("R", 1)], true).unwrap()
    }

    /// The base unordered vocabulary `{R²}`.
    pub fn sigma() -> Self {
        Vocabulary::new([("R", 2)], false).unwrap()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn has_order(&self) -> bool {
        self.has_order
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn arity_of(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.symbols[i].arity)
    }

    /// All arities are 1 and there is no order.
    pub fn is_aristotelian(&self) -> bool {
        !self.has_order && self.symbols.iter().all(|s| s.arity == 1)
    }

    /// `Σ n^{a_i}`: the length of the binary encoding of an `n`-element structure.
    pub fn encoding_len(&self, n: usize) -> Option<usize> {
        self.symbols.iter().try_fold(0usize, |acc, s| {
            let p = n.checked_pow(s.arity as u32)?;
            acc.checked_add(p)
        })
    }

    /// Parses `R:1 E:2 <` (tokens in any order; `<` at most once).
    pub fn parse(text: &str) -> Result<Self, StructureError> {
        let mut symbols = Vec::new();
        let mut has_order = false;
        for tok in text.split_whitespace() {
            if tok == "<" {
                if has_order {
                    return Err(StructureError::Parse {
                        line: 1,
                        msg: "`<` listed twice".into(),
                    });
                }
                has_order = true;
                continue;
            }
            let (name, arity) = tok.split_once(':').ok_or_else(|| StructureError::Parse {
                line: 1,
                msg: format!("expected name:arity, got `{tok}`"),
            })?;
            let arity: usize = arity.parse().map_err(|_| StructureError::Parse {
                line: 1,
                msg: format!("bad arity in `{tok}`"),
            })?;
            symbols.push((name.to_string(), arity));
        }
        Vocabulary::new(symbols, has_order)
    }
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.symbols {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}:{}", s.name, s.arity)?;
        }
        if self.has_order {
            f.write_str(" <")?;
        }
        Ok(())
    }
}
