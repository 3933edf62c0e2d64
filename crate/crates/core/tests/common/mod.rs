//! Test oracles written independently of the library's evaluator, plus
//! seeded generators for sentences, machines and structures.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use canonlogic::logic::{Fixpoint, Formula};
use canonlogic::machine::{Action, Kind, Machine, Move, Sym};
use canonlogic::{Bits, Structure, Vocabulary};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn p(s: &str) -> Formula {
    canonlogic::logic::parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn v(s: &str) -> Vocabulary {
    Vocabulary::parse(s).unwrap()
}

/// Number of binary digits of `x`, iterated `k` times.
pub fn ell_k(x: u64, k: u32) -> u64 {
    let mut v = x;
    for _ in 0..k {
        v = format!("{v:b}").len() as u64;
    }
    v
}

/// All tuples of length `k` over `0..n`, in lexicographic order.
pub fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Every structure of size exactly `n`, built tuple by tuple.
pub fn all_structures(vocab: &Vocabulary, n: usize) -> Vec<Structure> {
    let slots: Vec<(usize, Vec<usize>)> = vocab
        .symbols()
        .iter()
        .enumerate()
        .flat_map(|(i, s)| tuples(n, s.arity).into_iter().map(move |t| (i, t)))
        .collect();
    assert!(slots.len() < 24, "too many structures");
    (0u64..1 << slots.len())
        .map(|mask| {
            let mut a = Structure::empty(vocab.clone(), n).unwrap();
            for (bit, (i, t)) in slots.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    a.set(*i, t, true);
                }
            }
            a
        })
        .collect()
}

pub fn random_structure(r: &mut impl Rng, vocab: &Vocabulary, n: usize, density: f64) -> Structure {
    let mut a = Structure::empty(vocab.clone(), n).unwrap();
    for (i, s) in vocab.symbols().iter().enumerate() {
        for t in tuples(n, s.arity) {
            if r.gen_bool(density) {
                a.set(i, &t, true);
            }
        }
    }
    a
}

// ---------------------------------------------------------------------------
// Naive evaluator: the textbook truth definition, no compilation, no folding.

type Rel = HashSet<Vec<usize>>;

struct Env<'a> {
    a: &'a Structure,
    vars: Vec<(String, usize)>,
    rels: Vec<(String, Rel)>,
}

impl Env<'_> {
    fn var(&self, x: &str) -> usize {
        self.vars
            .iter()
            .rev()
            .find(|(n, _)| n == x)
            .unwrap_or_else(|| panic!("unbound {x}"))
            .1
    }

    fn vals(&self, xs: &[String]) -> Vec<usize> {
        xs.iter().map(|x| self.var(x)).collect()
    }

    fn atom(&self, rel: &str, args: &[usize]) -> bool {
        if let Some((_, r)) = self.rels.iter().rev().find(|(n, _)| n == rel) {
            return r.contains(args);
        }
        let i = self.a.vocab().index_of(rel).expect("symbol");
        self.a.holds(i, args)
    }

    fn with_vars<T>(&mut self, xs: &[String], vals: &[usize], f: impl FnOnce(&mut Self) -> T) -> T {
        for (x, v) in xs.iter().zip(vals) {
            self.vars.push((x.clone(), *v));
        }
        let out = f(self);
        self.vars.truncate(self.vars.len() - xs.len());
        out
    }

    fn with_rel<T>(&mut self, name: &str, r: Rel, f: impl FnOnce(&mut Self) -> T) -> T {
        self.rels.push((name.to_string(), r));
        let out = f(self);
        self.rels.pop();
        out
    }

    fn holds(&mut self, f: &Formula) -> bool {
        use Formula::*;
        let n = self.a.n();
        match f {
            Atom { rel, args } => {
                let t = self.vals(args);
                self.atom(rel, &t)
            }
            Eq(x, y) => self.var(x) == self.var(y),
            Neq(x, y) => self.var(x) != self.var(y),
            Lt(x, y) => self.var(x) < self.var(y),
            Bit(x, y) => {
                let (i, j) = (self.var(x), self.var(y));
                j < 64 && (i >> j) & 1 == 1
            }
            Not(g) => !self.holds(g),
            And(g, h) => self.holds(g) && self.holds(h),
            Or(g, h) => self.holds(g) || self.holds(h),
            Implies(g, h) => !self.holds(g) || self.holds(h),
            Exists(x, g) => {
                (0..n).any(|i| self.with_vars(std::slice::from_ref(x), &[i], |e| e.holds(g)))
            }
            Forall(x, g) => {
                (0..n).all(|i| self.with_vars(std::slice::from_ref(x), &[i], |e| e.holds(g)))
            }
            ExistsSo { rel, arity, body } => subsets(n, *arity)
                .into_iter()
                .any(|r| self.with_rel(rel, r, |e| e.holds(body))),
            ForallSo { rel, arity, body } => subsets(n, *arity)
                .into_iter()
                .all(|r| self.with_rel(rel, r, |e| e.holds(body))),
            Tc {
                from,
                to,
                body,
                src,
                dst,
            } => {
                let k = from.len();
                let all = tuples(n, k);
                let (s, d) = (self.vals(src), self.vals(dst));
                let mut seen: HashSet<Vec<usize>> = HashSet::from([s.clone()]);
                let mut frontier = vec![s];
                while let Some(u) = frontier.pop() {
                    for w in &all {
                        if seen.contains(w) {
                            continue;
                        }
                        let step =
                            self.with_vars(from, &u, |e| e.with_vars(to, w, |e| e.holds(body)));
                        if step {
                            seen.insert(w.clone());
                            frontier.push(w.clone());
                        }
                    }
                }
                seen.contains(&d)
            }
            Lfp(fp) => {
                let mut cur = Rel::new();
                loop {
                    let next = self.stage(fp, &cur);
                    if next == cur {
                        break;
                    }
                    cur = next;
                }
                cur.contains(&self.vals(&fp.args))
            }
            Pfp(fp) => {
                let mut history: Vec<Vec<Vec<usize>>> = Vec::new();
                let mut cur = Rel::new();
                let fixed = loop {
                    let next = self.stage(fp, &cur);
                    if next == cur {
                        break Some(cur);
                    }
                    let mut key: Vec<Vec<usize>> = cur.iter().cloned().collect();
                    key.sort();
                    if history.contains(&key) {
                        break None;
                    }
                    history.push(key);
                    cur = next;
                };
                fixed.is_some_and(|r| r.contains(&self.vals(&fp.args)))
            }
            Char(_) => panic!("the naive evaluator does not handle characteristic leaves"),
        }
    }

    fn stage(&mut self, fp: &Fixpoint, cur: &Rel) -> Rel {
        let n = self.a.n();
        tuples(n, fp.vars.len())
            .into_iter()
            .filter(|t| {
                self.with_rel(&fp.rel, cur.clone(), |e| {
                    e.with_vars(&fp.vars, t, |e| e.holds(&fp.body))
                })
            })
            .collect()
    }
}

fn subsets(n: usize, arity: usize) -> Vec<Rel> {
    let all = tuples(n, arity);
    assert!(
        all.len() <= 20,
        "relation variable too large for brute force"
    );
    (0u64..1 << all.len())
        .map(|mask| {
            all.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, t)| t.clone())
                .collect()
        })
        .collect()
}

pub fn naive_models(a: &Structure, f: &Formula) -> bool {
    Env {
        a,
        vars: vec![],
        rels: vec![],
    }
    .holds(f)
}

// ---------------------------------------------------------------------------
// Closure oracles on explicit edge sets.

/// Reflexive-transitive closure by Floyd-Warshall.
pub fn rt_closure(n: usize, edges: &HashSet<(usize, usize)>) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(u, w) in edges {
        r[u][w] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

pub fn edges_of(a: &Structure, rel: &str) -> HashSet<(usize, usize)> {
    let i = a.vocab().index_of(rel).unwrap();
    a.tuples(i).into_iter().map(|t| (t[0], t[1])).collect()
}

// ---------------------------------------------------------------------------
// Seeded generators.

/// Random sentence over `tau`. Variables are named by binding depth, so every
/// atom refers to variables in scope. With `so` set, one unary relation
/// variable `X` is quantified at the front (existentially or universally).
pub fn random_sentence(
    r: &mut impl Rng,
    tau: &Vocabulary,
    depth: usize,
    so: Option<bool>,
) -> Formula {
    let mut rels: Vec<(String, usize)> = tau
        .symbols()
        .iter()
        .map(|s| (s.name.clone(), s.arity))
        .collect();
    if so.is_some() {
        rels.push(("X".into(), 1));
    }
    let x0 = "x0".to_string();
    let body = Formula::Exists(
        x0.clone(),
        Box::new(random_formula(r, &rels, tau.has_order(), &[x0], depth)),
    );
    let body = if r.gen_bool(0.5) {
        body
    } else {
        let Formula::Exists(x, b) = body else {
            unreachable!()
        };
        Formula::Forall(x, b)
    };
    match so {
        None => body,
        Some(true) => Formula::ExistsSo {
            rel: "X".into(),
            arity: 1,
            body: Box::new(body),
        },
        Some(false) => Formula::ForallSo {
            rel: "X".into(),
            arity: 1,
            body: Box::new(body),
        },
    }
}

fn random_formula(
    r: &mut impl Rng,
    rels: &[(String, usize)],
    order: bool,
    scope: &[String],
    depth: usize,
) -> Formula {
    let pick = |r: &mut dyn rand::RngCore| scope[r.gen_range(0..scope.len())].clone();
    let leaf = depth == 0 || r.gen_bool(0.25);
    if leaf {
        return match r.gen_range(0..if order { 4 } else { 3 }) {
            0 | 1 => {
                let (rel, k) = &rels[r.gen_range(0..rels.len())];
                Formula::Atom {
                    rel: rel.clone(),
                    args: (0..*k).map(|_| pick(r)).collect(),
                }
            }
            2 => Formula::Eq(pick(r), pick(r)),
            _ => Formula::Lt(pick(r), pick(r)),
        };
    }
    let sub = |r: &mut _| Box::new(random_formula(r, rels, order, scope, depth - 1));
    match r.gen_range(0..6) {
        0 => Formula::Not(sub(r)),
        1 => Formula::And(sub(r), sub(r)),
        2 => Formula::Or(sub(r), sub(r)),
        3 => Formula::Implies(sub(r), sub(r)),
        q => {
            let x = format!("x{}", scope.len());
            let mut inner = scope.to_vec();
            inner.push(x.clone());
            let b = Box::new(random_formula(r, rels, order, &inner, depth - 1));
            if q == 4 {
                Formula::Exists(x, b)
            } else {
                Formula::Forall(x, b)
            }
        }
    }
}

pub fn random_machine(r: &mut impl Rng, kind: Kind) -> Machine {
    let states = r.gen_range(4..8);
    let syms = [Sym::Zero, Sym::One, Sym::Blank];
    let moves = [Move::Left, Move::Right, Move::Stay];
    let mut transitions = BTreeMap::new();
    for _ in 0..r.gen_range(0..6) {
        let key = (
            r.gen_range(2..states),
            *syms.choose(r).unwrap(),
            *syms.choose(r).unwrap(),
        );
        let action = Action {
            next: r.gen_range(0..states),
            write: *syms.choose(r).unwrap(),
            input_move: *moves.choose(r).unwrap(),
            storage_move: *moves.choose(r).unwrap(),
            oracle: [None, Some(false), Some(true)][r.gen_range(0..3)],
        };
        transitions.insert(key, action);
    }
    let start = r.gen_range(2..states);
    Machine::new(
        kind,
        r.gen_range(1..4),
        r.gen_range(1..4),
        states,
        start,
        transitions,
    )
    .unwrap()
}

pub fn random_bits(r: &mut impl Rng, len: usize) -> Bits {
    (0..len).map(|_| r.gen_bool(0.5)).collect()
}

// ---------------------------------------------------------------------------
// Grammars.

/// Words of length at most `max` derivable from the start symbol, by
/// breadth-first leftmost derivation over sentential forms.
pub fn derivable(g: &canonlogic::cfg::Grammar, max: usize) -> HashSet<String> {
    #[derive(Clone, PartialEq, Eq, Hash)]
    enum S {
        T(char),
        N(String),
    }
    let mut rules: HashMap<String, Vec<Vec<S>>> = HashMap::new();
    for (lhs, rhs) in g.named_productions() {
        let body = rhs
            .into_iter()
            .map(|s| match s {
                canonlogic::cfg::Named::T(c) => S::T(c),
                canonlogic::cfg::Named::N(n) => S::N(n),
            })
            .collect();
        rules.entry(lhs).or_default().push(body);
    }
    let start = g.nonterminals()[g.start()].clone();
    let mut seen: HashSet<Vec<S>> = HashSet::new();
    let mut queue = vec![vec![S::N(start)]];
    let mut words = HashSet::new();
    while let Some(form) = queue.pop() {
        let Some(pos) = form.iter().position(|s| matches!(s, S::N(_))) else {
            words.insert(
                form.iter()
                    .map(|s| if let S::T(c) = s { *c } else { unreachable!() })
                    .collect(),
            );
            continue;
        };
        let S::N(name) = &form[pos] else {
            unreachable!()
        };
        for body in rules.get(name).into_iter().flatten() {
            let mut next = form[..pos].to_vec();
            next.extend(body.iter().cloned());
            next.extend(form[pos + 1..].iter().cloned());
            let terminals = next.iter().filter(|s| matches!(s, S::T(_))).count();
            if terminals > max || next.len() > 3 * max + 2 {
                continue;
            }
            if seen.insert(next.clone()) {
                queue.push(next);
            }
        }
    }
    words
}

/// Whether `g` generates `w`: the least table of facts "nonterminal derives
/// `w[i..j]`", grown by matching whole productions until nothing changes.
pub fn generates(g: &canonlogic::cfg::Grammar, w: &str) -> bool {
    use canonlogic::cfg::Named;
    let w: Vec<char> = w.chars().collect();
    let n = w.len();
    let rules = g.named_productions();
    let mut table: HashSet<(String, usize, usize)> = HashSet::new();
    loop {
        let mut grew = false;
        for (lhs, rhs) in &rules {
            for i in 0..=n {
                for j in i..=n {
                    if table.contains(&(lhs.clone(), i, j)) {
                        continue;
                    }
                    // positions reachable after matching a prefix of rhs
                    let mut at: HashSet<usize> = HashSet::from([i]);
                    for sym in rhs {
                        at = at
                            .iter()
                            .flat_map(|&k| (k..=j).map(move |l| (k, l)))
                            .filter(|&(k, l)| match sym {
                                Named::T(c) => l == k + 1 && w[k] == *c,
                                Named::N(a) => table.contains(&(a.clone(), k, l)),
                            })
                            .map(|(_, l)| l)
                            .collect();
                    }
                    if at.contains(&j) {
                        table.insert((lhs.clone(), i, j));
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    table.contains(&(g.nonterminals()[g.start()].clone(), 0, n))
}

pub fn words_upto(alphabet: &[char], max: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max {
        layer = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

// ---------------------------------------------------------------------------
// Single-node mutations.

/// Every formula obtained from `f` by one local edit at one node.
pub fn mutations(f: &Formula) -> Vec<Formula> {
    let count = f.size();
    let mut out = Vec::new();
    for i in 0..count {
        for m in 0..6 {
            let mut g = f.clone();
            let mut idx = i;
            if mutate_at(&mut g, &mut idx, m) == Some(true) && g != *f {
                out.push(g);
            }
        }
    }
    out
}

/// Applies mutation `which` at the node with pre-order index `*idx`.
fn mutate_at(f: &mut Formula, idx: &mut usize, which: usize) -> Option<bool> {
    if *idx == 0 {
        return Some(mutate_node(f, which));
    }
    *idx -= 1;
    f.children_mut()
        .into_iter()
        .find_map(|c| mutate_at(c, idx, which))
}

fn mutate_node(f: &mut Formula, which: usize) -> bool {
    use Formula::*;
    let boxed = |g: &Formula| Box::new(g.clone());
    let new = match (which, &*f) {
        (0, g) => Not(boxed(g)),
        (1, And(a, b)) => Or(a.clone(), b.clone()),
        (1, Or(a, b)) => And(a.clone(), b.clone()),
        (1, Exists(x, b)) => Forall(x.clone(), b.clone()),
        (1, Forall(x, b)) => Exists(x.clone(), b.clone()),
        (1, Eq(x, y)) => Neq(x.clone(), y.clone()),
        (1, Neq(x, y)) => Eq(x.clone(), y.clone()),
        (1, Not(g)) => (**g).clone(),
        (2, And(a, b) | Or(a, b) | Implies(a, b)) => Or(b.clone(), a.clone()),
        (2, Atom { rel, args }) if args.len() > 1 => {
            let mut args = args.clone();
            args.reverse();
            if args[0] == args[args.len() - 1] {
                return false;
            }
            Atom {
                rel: rel.clone(),
                args,
            }
        }
        (3, Char(leaf)) => {
            let mut parts: Vec<Bits> = leaf.payloads().into_iter().cloned().collect();
            let last = parts.len() - 1;
            let b = &mut parts[last];
            if b.is_empty() {
                return false;
            }
            b.flip(b.len() - 1);
            Char(canonlogic::logic::CharLeaf::from_parts(leaf.keyword(), parts).unwrap())
        }
        (4, Char(leaf)) => {
            let mut parts: Vec<Bits> = leaf.payloads().into_iter().cloned().collect();
            let b = &mut parts[0];
            if b.is_empty() {
                return false;
            }
            b.flip(0);
            Char(canonlogic::logic::CharLeaf::from_parts(leaf.keyword(), parts).unwrap())
        }
        (5, Exists(x, _) | Forall(x, _)) => Exists(x.clone(), Box::new(Eq(x.clone(), x.clone()))),
        (5, Atom { args, .. }) if !args.is_empty() => Eq(args[0].clone(), args[0].clone()),
        _ => return false,
    };
    *f = new;
    true
}
