//! Finite structures over initial-segment universes, their binary encoding,
//! exhaustive enumeration, and brute-force isomorphism.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use thiserror::Error;

use crate::bits::Bits;
use crate::vocab::Vocabulary;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("vocabulary has no relation symbols")]
    EmptyVocabulary,
    #[error("invalid relation symbol name `{0}`")]
    InvalidName(String),
    #[error("relation symbol `{0}` has arity 0 or above the supported maximum")]
    ZeroArity(String),
    #[error("relation symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("universe size {0} is below 2")]
    UniverseTooSmall(usize),
    #[error("no universe size n >= 2 gives an encoding of length {len}")]
    NoIntegerUniverse { len: usize },
    #[error("structures are over different vocabularies")]
    VocabMismatch,
    #[error("unknown relation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("tuple for `{symbol}` has {found} components, expected {expected}")]
    TupleArity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("tuple component {value} for `{symbol}` is outside a universe of size {n}")]
    TupleOutOfRange {
        symbol: String,
        value: usize,
        n: usize,
    },
    #[error("universe of size {0} is too large to encode")]
    TooLarge(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A finite structure with universe `{0,…,n−1}`. Each relation is stored as its
/// characteristic string of length `n^arity`; the order symbol, when present in
/// the vocabulary, is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    vocab: Arc<Vocabulary>,
    n: usize,
    rels: Vec<Vec<bool>>,
}

/// Position of a tuple inside a characteristic string: `Σ t_j n^(a−j)`.
pub fn tuple_index(n: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &t| acc * n + t)
}

/// Inverse of [`tuple_index`] for a fixed arity.
pub fn index_tuple(n: usize, arity: usize, mut index: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    out
}

impl Structure {
    /// The structure of size `n` with every relation empty.
    pub fn empty(vocab: impl Into<Arc<Vocabulary>>, n: usize) -> Result<Self, StructureError> {
        let vocab = vocab.into();
        if n < 2 {
            return Err(StructureError::UniverseTooSmall(n));
        }
        let rels = vocab
            .symbols()
            .iter()
            .map(|s| {
                n.checked_pow(s.arity as u32)
                    .map(|len| vec![false; len])
                    .ok_or(StructureError::TooLarge(n))
            })
            .collect::<Result<_, _>>()?;
        Ok(Structure { vocab, n, rels })
    }

    /// Builds a structure from explicit tuple lists, keyed by symbol name.
    /// Symbols not mentioned are empty.
    pub fn from_tuples(
        vocab: impl Into<Arc<Vocabulary>>,
        n: usize,
        tuples: &[(&str, &[&[usize]])],
    ) -> Result<Self, StructureError> {
        let mut s = Structure::empty(vocab, n)?;
        for (name, list) in tuples {
            for t in *list {
                s.insert(name, t)?;
            }
        }
        Ok(s)
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn shared_vocab(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Characteristic string of the `i`-th symbol.
    pub fn relation(&self, i: usize) -> &[bool] {
        &self.rels[i]
    }

    pub fn holds(&self, i: usize, tuple: &[usize]) -> bool {
        self.rels[i][tuple_index(self.n, tuple)]
    }

    pub fn set(&mut self, i: usize, tuple: &[usize], value: bool) {
        let idx = tuple_index(self.n, tuple);
        self.rels[i][idx] = value;
    }

    /// Adds a tuple to the relation named `name`, checking arity and range.
    pub fn insert(&mut self, name: &str, tuple: &[usize]) -> Result<(), StructureError> {
        let i = self
            .vocab
            .index_of(name)
            .ok_or_else(|| StructureError::UnknownSymbol(name.to_string()))?;
        let arity = self.vocab.symbols()[i].arity;
        if tuple.len() != arity {
            return Err(StructureError::TupleArity {
                symbol: name.to_string(),
                expected: arity,
                found: tuple.len(),
            });
        }
        if let Some(&value) = tuple.iter().find(|&&t| t >= self.n) {
            return Err(StructureError::TupleOutOfRange {
                symbol: name.to_string(),
                value,
                n: self.n,
            });
        }
        self.set(i, tuple, true);
        Ok(())
    }

    /// Tuples of the `i`-th relation in lexicographic order.
    pub fn tuples(&self, i: usize) -> Vec<Vec<usize>> {
        let arity = self.vocab.symbols()[i].arity;
        self.rels[i]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(idx, _)| index_tuple(self.n, arity, idx))
            .collect()
    }

    pub fn encode_bin(&self) -> Bits {
        self.rels.iter().flatten().copied().collect()
    }

    pub fn decode_bin(
        vocab: impl Into<Arc<Vocabulary>>,
        bits: &Bits,
    ) -> Result<Self, StructureError> {
        let vocab = vocab.into();
        let len = bits.len();
        let mut n = 2;
        loop {
            match vocab.encoding_len(n) {
                Some(l) if l == len => break,
                Some(l) if l < len => n += 1,
                _ => return Err(StructureError::NoIntegerUniverse { len }),
            }
        }
        let mut rels = Vec::with_capacity(vocab.len());
        let mut rest = bits.as_slice();
        for s in vocab.symbols() {
            let (head, tail) = rest.split_at(n.pow(s.arity as u32));
            rels.push(head.to_vec());
            rest = tail;
        }
        Ok(Structure { vocab, n, rels })
    }

    /// The image of `self` under the bijection `i ↦ perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Structure {
        assert_eq!(perm.len(), self.n, "permutation size differs from universe");
        let rels = self
            .vocab
            .symbols()
            .iter()
            .zip(&self.rels)
            .map(|(s, rel)| {
                let mut out = vec![false; rel.len()];
                for (idx, _) in rel.iter().enumerate().filter(|(_, &b)| b) {
                    let t = index_tuple(self.n, s.arity, idx);
                    let image: Vec<usize> = t.iter().map(|&x| perm[x]).collect();
                    out[tuple_index(self.n, &image)] = true;
                }
                out
            })
            .collect();
        Structure {
            vocab: self.vocab.clone(),
            n: self.n,
            rels,
        }
    }

    /// Parses the line-oriented text format:
    ///
    /// ```text
    /// vocab R:1 E:2 <
    /// n = 3
    /// E = (0,1) (1,2)
    /// ```
    ///
    /// Blank lines and `#` comments are skipped; omitted symbols are empty.
    pub fn parse(text: &str) -> Result<Self, StructureError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let perr = |line, msg: String| StructureError::Parse { line, msg };

        let (line, header) = lines
            .next()
            .ok_or_else(|| perr(1, "missing `vocab` header".into()))?;
        let spec = header
            .strip_prefix("vocab")
            .ok_or_else(|| perr(line, "expected `vocab ...`".into()))?;
        let vocab = Vocabulary::parse(spec).map_err(|e| match e {
            StructureError::Parse { msg, .. } => perr(line, msg),
            other => other,
        })?;

        let (line, size) = lines
            .next()
            .ok_or_else(|| perr(line, "missing `n = ...` line".into()))?;
        let n = size
            .split_once('=')
            .filter(|(k, _)| k.trim() == "n")
            .and_then(|(_, v)| v.trim().parse::<usize>().ok())
            .ok_or_else(|| perr(line, "expected `n = <int>`".into()))?;
        let mut s = Structure::empty(vocab, n)?;

        let mut seen = Vec::new();
        for (line, l) in lines {
            let (name, rest) = l
                .split_once('=')
                .ok_or_else(|| perr(line, "expected `NAME = (..) (..)`".into()))?;
            let name = name.trim();
            if seen.contains(&name) {
                return Err(perr(line, format!("relation `{name}` listed twice")));
            }
            seen.push(name);
            for t in parse_tuples(rest).map_err(|msg| perr(line, msg))? {
                s.insert(name, &t)?;
            }
        }
        Ok(s)
    }
}

fn parse_tuples(text: &str) -> Result<Vec<Vec<usize>>, String> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| format!("expected `(` at `{rest}`"))?;
        let (inside, after) = body
            .split_once(')')
            .ok_or_else(|| "unclosed tuple".to_string())?;
        let tuple = inside
            .split(',')
            .map(|c| c.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| format!("bad tuple `({inside})`"))?;
        out.push(tuple);
        rest = after.trim_start();
    }
    Ok(out)
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vocab {}", self.vocab)?;
        writeln!(f, "n = {}", self.n)?;
        for (i, s) in self.vocab.symbols().iter().enumerate() {
            write!(f, "{} =", s.name)?;
            for t in self.tuples(i) {
                write!(f, " ({})", t.iter().join(","))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Brute-force isomorphism test. Ordered structures are isomorphic only when
/// equal, since the order pins every element.
pub fn is_isomorphic(a: &Structure, b: &Structure) -> Result<bool, StructureError> {
    if a.vocab != b.vocab {
        return Err(StructureError::VocabMismatch);
    }
    if a.n != b.n {
        return Ok(false);
    }
    if a.vocab.has_order() {
        return Ok(a.rels == b.rels);
    }
    let count = |r: &[bool]| r.iter().filter(|&&x| x).count();
    if a.rels
        .iter()
        .zip(&b.rels)
        .any(|(x, y)| count(x) != count(y))
    {
        return Ok(false);
    }
    let present: Vec<Vec<Vec<usize>>> = (0..a.rels.len()).map(|i| a.tuples(i)).collect();
    let n = a.n;
    let mut image = Vec::new();
    Ok((0..n).permutations(n).any(|perm| {
        present.iter().enumerate().all(|(i, ts)| {
            ts.iter().all(|t| {
                image.clear();
                image.extend(t.iter().map(|&x| perm[x]));
                b.rels[i][tuple_index(n, &image)]
            })
        })
    }))
}

/// Every structure with `2 ≤ n ≤ n_max`, by increasing `n` and then by the
/// lexicographic order of the binary encoding.
pub fn enumerate_structures(vocab: &Vocabulary, n_max: usize) -> Structures {
    Structures::new(Arc::new(vocab.clone()), 2, n_max)
}

/// Every structure of exactly size `n`, in encoding order.
pub fn structures_of_size(vocab: &Vocabulary, n: usize) -> Structures {
    Structures::new(Arc::new(vocab.clone()), n, n)
}

#[derive(Debug, Clone)]
pub struct Structures {
    vocab: Arc<Vocabulary>,
    n: usize,
    n_max: usize,
    current: Option<Vec<bool>>,
}

impl Structures {
    fn new(vocab: Arc<Vocabulary>, n_min: usize, n_max: usize) -> Self {
        let n = n_min.max(2);
        let current = (n <= n_max).then(|| vec![false; vocab.encoding_len(n).expect("size")]);
        Structures {
            vocab,
            n,
            n_max,
            current,
        }
    }
}

impl Iterator for Structures {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        let bits = self.current.as_mut()?;
        let mut rels = Vec::with_capacity(self.vocab.len());
        let mut rest = bits.as_slice();
        for s in self.vocab.symbols() {
            let (head, tail) = rest.split_at(self.n.pow(s.arity as u32));
            rels.push(head.to_vec());
            rest = tail;
        }
        let out = Structure {
            vocab: self.vocab.clone(),
            n: self.n,
            rels,
        };
        // binary increment with the first bit most significant
        match bits.iter().rposition(|&b| !b) {
            Some(i) => {
                bits[i] = true;
                bits[i + 1..].iter_mut().for_each(|b| *b = false);
            }
            None => {
                self.n += 1;
                self.current = (self.n <= self.n_max)
                    .then(|| vec![false; self.vocab.encoding_len(self.n).expect("size")]);
            }
        }
        Some(out)
    }
}
