//! Enumeration of sentences and machines by exact code length, and of forms
//! by total component code length.

use std::collections::{HashMap, VecDeque};

use super::{CanonicalForm, Extra, FormKind, FormSpec};
use crate::bits::Bits;
use crate::logic::{check_sentence, fragment_of, godel_encode, Fixpoint, Formula, Fragment};
use crate::machine::{encode_tm, Action, Kind, Machine, Move, Sym, RESERVED_STATES};
use crate::natcode::nat_code_len;
use crate::vocab::{
    is_relation_name, is_variable_name, Vocabulary, MAX_ARITY, MAX_NAME_LEN, RESERVED_NAMES,
};

fn cost(v: u64) -> usize {
    nat_code_len(v)
}

fn name_cost(s: &str) -> usize {
    cost(s.len() as u64) + s.bytes().map(|b| cost(b as u64)).sum::<usize>()
}

/// Names whose code is exactly `budget` bits.
struct NameTable {
    upper: bool,
    cache: HashMap<usize, Vec<String>>,
}

impl NameTable {
    fn new(upper: bool) -> Self {
        NameTable {
            upper,
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, budget: usize) -> &[String] {
        let upper = self.upper;
        self.cache
            .entry(budget)
            .or_insert_with(|| names_of_cost(budget, upper))
    }
}

fn names_of_cost(budget: usize, upper: bool) -> Vec<String> {
    let first: Vec<u8> = if upper {
        (b'A'..=b'Z').collect()
    } else {
        (b'a'..=b'z').collect()
    };
    let rest: Vec<u8> = if upper {
        (b'A'..=b'Z')
            .chain(b'a'..=b'z')
            .chain(b'0'..=b'9')
            .chain(*b"_")
            .collect()
    } else {
        (b'a'..=b'z').chain(b'0'..=b'9').chain(*b"_").collect()
    };
    let min_char = rest.iter().map(|&b| cost(b as u64)).min().unwrap_or(1);
    let mut out = Vec::new();
    let mut len = 1;
    while len <= MAX_NAME_LEN && cost(len as u64) + len * min_char <= budget {
        let mut buf = Vec::with_capacity(len);
        fill_name(
            &mut buf,
            len,
            budget - cost(len as u64),
            &first,
            &rest,
            &mut out,
        );
        len += 1;
    }
    out.retain(|s| {
        !RESERVED_NAMES.contains(&s.as_str())
            && if upper {
                is_relation_name(s)
            } else {
                is_variable_name(s)
            }
    });
    out
}

fn fill_name(
    buf: &mut Vec<u8>,
    len: usize,
    budget: usize,
    first: &[u8],
    rest: &[u8],
    out: &mut Vec<String>,
) {
    if buf.len() == len {
        if budget == 0 {
            out.push(String::from_utf8(buf.clone()).expect("ascii"));
        }
        return;
    }
    let pool = if buf.is_empty() { first } else { rest };
    for &b in pool {
        let c = cost(b as u64);
        if c <= budget {
            buf.push(b);
            fill_name(buf, len, budget - c, first, rest, out);
            buf.pop();
        }
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
struct Scope {
    vars: Vec<String>,
    rels: Vec<(String, usize)>,
}

impl Scope {
    fn with_vars(&self, vs: &[String]) -> Scope {
        let mut s = self.clone();
        for v in vs {
            if !s.vars.contains(v) {
                s.vars.push(v.clone());
            }
        }
        s
    }

    fn with_rel(&self, r: &str, arity: usize) -> Scope {
        let mut s = self.clone();
        s.rels.retain(|(n, _)| n != r);
        s.rels.push((r.to_string(), arity));
        s
    }
}

struct Features {
    order: bool,
    so_exists: bool,
    so_forall: bool,
    tc: bool,
    lfp: bool,
    pfp: bool,
}

impl Features {
    fn new(tau: &Vocabulary, frag: Fragment) -> Self {
        use Fragment::*;
        Features {
            order: tau.has_order(),
            so_exists: matches!(frag, SoExists | SoPfp),
            so_forall: matches!(frag, SoForall | SoPfp),
            tc: matches!(frag, FoTc | FoLfp | SoPfp),
            lfp: matches!(frag, FoLfp | SoPfp),
            pfp: matches!(frag, SoPfp),
        }
    }
}

struct Generator<'a> {
    tau: &'a Vocabulary,
    feats: Features,
    vars: NameTable,
    rels: NameTable,
    min_len: usize,
    memo: HashMap<(usize, Scope), Vec<Formula>>,
}

impl<'a> Generator<'a> {
    fn new(tau: &'a Vocabulary, frag: Fragment) -> Self {
        // the cheapest formula is an equality between one-letter variables
        let min_len = cost(1) + 2 * name_cost("a");
        Generator {
            tau,
            feats: Features::new(tau, frag),
            vars: NameTable::new(false),
            rels: NameTable::new(true),
            min_len,
            memo: HashMap::new(),
        }
    }

    /// All sequences of `k` in-scope variables whose codes total `budget`.
    fn args(&self, k: usize, budget: usize, scope: &Scope) -> Vec<Vec<String>> {
        fn go(
            k: usize,
            budget: usize,
            vars: &[(String, usize)],
            cur: &mut Vec<String>,
            out: &mut Vec<Vec<String>>,
        ) {
            if cur.len() == k {
                if budget == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for (v, c) in vars {
                if *c <= budget {
                    cur.push(v.clone());
                    go(k, budget - c, vars, cur, out);
                    cur.pop();
                }
            }
        }
        let vars: Vec<(String, usize)> = scope
            .vars
            .iter()
            .map(|v| (v.clone(), name_cost(v)))
            .collect();
        let mut out = Vec::new();
        go(k, budget, &vars, &mut Vec::new(), &mut out);
        out
    }

    /// All sequences of `k` fresh variable names whose codes total `budget`.
    fn binders(&mut self, k: usize, budget: usize) -> Vec<Vec<String>> {
        if k == 0 {
            return if budget == 0 {
                vec![Vec::new()]
            } else {
                Vec::new()
            };
        }
        let mut out = Vec::new();
        let floor = (k - 1) * name_cost("a");
        for c in name_cost("a")..=budget.saturating_sub(floor) {
            let names = self.vars.get(c).to_vec();
            if names.is_empty() {
                continue;
            }
            for tail in self.binders(k - 1, budget - c) {
                for n in &names {
                    let mut v = vec![n.clone()];
                    v.extend(tail.iter().cloned());
                    out.push(v);
                }
            }
        }
        out
    }

    fn formulas(&mut self, len: usize, scope: &Scope) -> Vec<Formula> {
        if len < self.min_len {
            return Vec::new();
        }
        let key = (len, scope.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let out = self.formulas_uncached(len, scope);
        self.memo.insert(key, out.clone());
        out
    }

    fn formulas_uncached(&mut self, len: usize, scope: &Scope) -> Vec<Formula> {
        let mut out = Vec::new();
        for tag in 0u64..=15 {
            let c = cost(tag);
            if c > len {
                continue;
            }
            let rem = len - c;
            match tag {
                0 => {
                    let mut rels: Vec<(String, usize)> = self
                        .tau
                        .symbols()
                        .iter()
                        .map(|s| (s.name.clone(), s.arity))
                        .collect();
                    rels.extend(scope.rels.iter().cloned());
                    for (r, a) in rels {
                        let head = name_cost(&r) + cost(a as u64);
                        if head > rem {
                            continue;
                        }
                        for args in self.args(a, rem - head, scope) {
                            out.push(Formula::Atom {
                                rel: r.clone(),
                                args,
                            });
                        }
                    }
                }
                1..=4 => {
                    if tag >= 3 && !self.feats.order {
                        continue;
                    }
                    for args in self.args(2, rem, scope) {
                        let [a, b] = <[String; 2]>::try_from(args).expect("two");
                        out.push(match tag {
                            1 => Formula::Eq(a, b),
                            2 => Formula::Neq(a, b),
                            3 => Formula::Lt(a, b),
                            _ => Formula::Bit(a, b),
                        });
                    }
                }
                5 => {
                    for f in self.formulas(rem, scope) {
                        out.push(Formula::Not(Box::new(f)));
                    }
                }
                6..=8 => {
                    for l1 in self.min_len..=rem.saturating_sub(self.min_len) {
                        let left = self.formulas(l1, scope);
                        if left.is_empty() {
                            continue;
                        }
                        let right = self.formulas(rem - l1, scope);
                        for a in &left {
                            for b in &right {
                                let (a, b) = (Box::new(a.clone()), Box::new(b.clone()));
                                out.push(match tag {
                                    6 => Formula::And(a, b),
                                    7 => Formula::Or(a, b),
                                    _ => Formula::Implies(a, b),
                                });
                            }
                        }
                    }
                }
                9 | 10 => {
                    for nc in name_cost("a")..=rem.saturating_sub(self.min_len) {
                        for x in self.vars.get(nc).to_vec() {
                            let inner = scope.with_vars(std::slice::from_ref(&x));
                            for f in self.formulas(rem - nc, &inner) {
                                out.push(if tag == 9 {
                                    Formula::Exists(x.clone(), Box::new(f))
                                } else {
                                    Formula::Forall(x.clone(), Box::new(f))
                                });
                            }
                        }
                    }
                }
                11 | 12 => {
                    if (tag == 11 && !self.feats.so_exists) || (tag == 12 && !self.feats.so_forall)
                    {
                        continue;
                    }
                    for nc in name_cost("A")..=rem.saturating_sub(cost(1) + self.min_len) {
                        for r in self.rels.get(nc).to_vec() {
                            if self.tau.index_of(&r).is_some() {
                                continue;
                            }
                            for arity in 1..=MAX_ARITY {
                                let head = nc + cost(arity as u64);
                                if head > rem {
                                    break;
                                }
                                let inner = scope.with_rel(&r, arity);
                                for f in self.formulas(rem - head, &inner) {
                                    let body = Box::new(f);
                                    out.push(if tag == 11 {
                                        Formula::ExistsSo {
                                            rel: r.clone(),
                                            arity,
                                            body,
                                        }
                                    } else {
                                        Formula::ForallSo {
                                            rel: r.clone(),
                                            arity,
                                            body,
                                        }
                                    });
                                }
                            }
                        }
                    }
                }
                13 => {
                    if self.feats.tc {
                        self.closures(rem, scope, &mut out);
                    }
                }
                _ => {
                    if (tag == 14 && self.feats.lfp) || (tag == 15 && self.feats.pfp) {
                        self.fixpoints(tag == 14, rem, scope, &mut out);
                    }
                }
            }
        }
        out
    }

    fn closures(&mut self, rem: usize, scope: &Scope, out: &mut Vec<Formula>) {
        for k in 1..=MAX_ARITY {
            let kc = cost(k as u64);
            let min_names = 2 * k * name_cost("a");
            if kc + 2 * min_names + self.min_len > rem {
                break;
            }
            let budget = rem - kc;
            for bind in 2 * k * name_cost("a")..=budget - self.min_len - min_names {
                for names in self.binders(2 * k, bind) {
                    let (from, to) = names.split_at(k);
                    let inner = scope.with_vars(&names);
                    let left = budget - bind;
                    for body_len in self.min_len..=left {
                        let ends = self.args(2 * k, left - body_len, scope);
                        if ends.is_empty() {
                            continue;
                        }
                        for body in self.formulas(body_len, &inner) {
                            for e in &ends {
                                out.push(Formula::Tc {
                                    from: from.to_vec(),
                                    to: to.to_vec(),
                                    body: Box::new(body.clone()),
                                    src: e[..k].to_vec(),
                                    dst: e[k..].to_vec(),
                                });
                            }
                        }
                    }
                }
            }
        }
    }

    fn fixpoints(&mut self, least: bool, rem: usize, scope: &Scope, out: &mut Vec<Formula>) {
        for nc in name_cost("A")..=rem.saturating_sub(cost(1) + 2 * name_cost("a") + self.min_len) {
            for r in self.rels.get(nc).to_vec() {
                for k in 1..=MAX_ARITY {
                    let head = nc + cost(k as u64);
                    if head + 2 * k * name_cost("a") + self.min_len > rem {
                        break;
                    }
                    let budget = rem - head;
                    for bind in k * name_cost("a")..=budget - self.min_len - k * name_cost("a") {
                        for vars in self.binders(k, bind) {
                            let inner = scope.with_vars(&vars).with_rel(&r, k);
                            let left = budget - bind;
                            for body_len in self.min_len..=left {
                                let args = self.args(k, left - body_len, scope);
                                if args.is_empty() {
                                    continue;
                                }
                                for body in self.formulas(body_len, &inner) {
                                    for a in &args {
                                        let fp = Fixpoint {
                                            rel: r.clone(),
                                            vars: vars.clone(),
                                            body: Box::new(body.clone()),
                                            args: a.clone(),
                                        };
                                        out.push(if least {
                                            Formula::Lfp(fp)
                                        } else {
                                            Formula::Pfp(fp)
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Every well-formed sentence over `tau` within `frag` whose code has
/// exactly `len` bits, with its code, in lexicographic code order.
pub fn sentences_of_len(tau: &Vocabulary, frag: Fragment, len: usize) -> Vec<(Bits, Formula)> {
    let mut g = Generator::new(tau, frag);
    let mut out: Vec<(Bits, Formula)> = g
        .formulas(len, &Scope::default())
        .into_iter()
        .filter(|f| check_sentence(f, tau).is_ok() && fragment_of(f).within(frag))
        .map(|f| (godel_encode(&f), f))
        .collect();
    debug_assert!(out.iter().all(|(c, _)| c.len() == len));
    out.sort();
    out.dedup();
    out
}

/// Cheapest nat code.
const MIN: usize = 4;
/// Cheapest transition: eight nats.
const MIN_TRANSITION: usize = 8 * MIN;

/// Every machine of the given kind whose code has exactly `len` bits, with
/// its code, in lexicographic code order.
pub fn machines_of_len(kind: Kind, len: usize) -> Vec<(Bits, Machine)> {
    let kc = cost(matches!(kind, Kind::Logspace) as u64);
    let min_states = cost(RESERVED_STATES as u64);
    let mut out = Vec::new();
    let values = |min: u64, budget: usize| (min..).take_while(move |&v| cost(v) <= budget);
    // clock, step, states, start, count
    let Some(rem) = len.checked_sub(kc) else {
        return out;
    };
    for c in values(1, rem.saturating_sub(MIN + min_states + 2 * MIN)) {
        let rem = rem - cost(c);
        for s in values(1, rem.saturating_sub(min_states + 2 * MIN)) {
            let rem = rem - cost(s);
            for n in values(RESERVED_STATES as u64, rem.saturating_sub(2 * MIN)) {
                let rem = rem - cost(n);
                for start in values(0, rem.saturating_sub(MIN)).take_while(|&q| q < n) {
                    let rem = rem - cost(start);
                    let keys = (n as usize - 2) * 9;
                    for k in values(0, rem).take_while(|&k| k as usize <= keys) {
                        let rem = rem - cost(k);
                        if rem < k as usize * MIN_TRANSITION {
                            break;
                        }
                        let mut acc = Vec::new();
                        transitions(n as usize, k as usize, rem, None, &mut acc, &mut |ts| {
                            if let Ok(t) = Machine::new(
                                kind,
                                c as u32,
                                s as u32,
                                n as usize,
                                start as usize,
                                ts.iter().cloned().collect(),
                            ) {
                                out.push((encode_tm(&t), t));
                            }
                        });
                    }
                }
            }
        }
    }
    out.sort();
    out
}

type Transition = ((usize, Sym, Sym), Action);

fn transitions(
    n: usize,
    k: usize,
    budget: usize,
    last: Option<(usize, Sym, Sym)>,
    acc: &mut Vec<Transition>,
    emit: &mut dyn FnMut(&[Transition]),
) {
    if k == 0 {
        if budget == 0 {
            emit(acc);
        }
        return;
    }
    const SYMS: [Sym; 3] = [Sym::Zero, Sym::One, Sym::Blank];
    const MOVES: [Move; 3] = [Move::Left, Move::Right, Move::Stay];
    // what the later transitions need at least
    let Some(budget) = budget.checked_sub((k - 1) * MIN_TRANSITION) else {
        return;
    };
    let reserve = (k - 1) * MIN_TRANSITION;
    // ACC and QUE take no transitions
    for state in 2..n {
        if cost(state as u64) + 7 * MIN > budget {
            break;
        }
        for i in SYMS {
            for st in SYMS {
                let key = (state, i, st);
                if last.is_some_and(|l| l >= key) {
                    continue;
                }
                let kc = cost(state as u64) + cost(i.index()) + cost(st.index());
                for next in 0..n {
                    let nc = kc + cost(next as u64);
                    if nc + 4 * MIN > budget {
                        break;
                    }
                    for w in SYMS {
                        for im in MOVES {
                            for sm in MOVES {
                                for o in 0u64..3 {
                                    let c = nc
                                        + cost(w.index())
                                        + cost(im.index())
                                        + cost(sm.index())
                                        + cost(o);
                                    if c > budget {
                                        continue;
                                    }
                                    acc.push((
                                        key,
                                        Action {
                                            next,
                                            write: w,
                                            input_move: im,
                                            storage_move: sm,
                                            oracle: [Some(false), Some(true), None][o as usize],
                                        },
                                    ));
                                    transitions(
                                        n,
                                        k - 1,
                                        budget - c + reserve,
                                        Some(key),
                                        acc,
                                        emit,
                                    );
                                    acc.pop();
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

enum Pool {
    Sentences(Fragment),
    Machines(Kind),
}

struct Stream {
    pool: Pool,
    by_len: Vec<Option<Vec<(Bits, Extra)>>>,
    min_len: Option<usize>,
}

impl Stream {
    fn new(pool: Pool) -> Self {
        Stream {
            pool,
            by_len: Vec::new(),
            min_len: None,
        }
    }

    /// Shortest code length present, found by scanning up from 1.
    fn min_len(&mut self, tau: &Vocabulary) -> usize {
        if let Some(m) = self.min_len {
            return m;
        }
        let mut len = 1;
        while self.get(tau, len).is_empty() {
            len += 1;
        }
        self.min_len = Some(len);
        len
    }

    fn get(&mut self, tau: &Vocabulary, len: usize) -> &[(Bits, Extra)] {
        if self.by_len.len() <= len {
            self.by_len.resize(len + 1, None);
        }
        let pool = &self.pool;
        self.by_len[len].get_or_insert_with(|| match pool {
            Pool::Sentences(frag) => sentences_of_len(tau, *frag, len)
                .into_iter()
                .map(|(c, f)| (c, Extra::Lambda(f)))
                .collect(),
            Pool::Machines(kind) => machines_of_len(*kind, len)
                .into_iter()
                .map(|(c, t)| (c, Extra::Machine(t)))
                .collect(),
        })
    }
}

/// Forms of a spec, dovetailed over component pairs in increasing total code
/// length with ties broken lexicographically on the pair of codes.
pub struct LogicEnumerator {
    spec: FormSpec,
    first: Stream,
    second: Stream,
    total: usize,
    ready: VecDeque<CanonicalForm>,
}

impl LogicEnumerator {
    pub(super) fn new(spec: FormSpec) -> Self {
        let frag = spec.class().fragment();
        // form 8 pairs are (Λ, Γ); the others (Γ, T)
        let second = if spec.kind() == FormKind::NpConp8 {
            Pool::Sentences(frag)
        } else {
            Pool::Machines(spec.class().machine_kind())
        };
        LogicEnumerator {
            spec,
            first: Stream::new(Pool::Sentences(frag)),
            second: Stream::new(second),
            total: 0,
            ready: VecDeque::new(),
        }
    }

    fn fill(&mut self) {
        while self.ready.is_empty() {
            self.total += 1;
            let tau = self.spec.tau().clone();
            let mut pairs: Vec<(Bits, Bits, Extra, Extra)> = Vec::new();
            let lo = self.first.min_len(&tau);
            let hi = self.total.saturating_sub(self.second.min_len(&tau));
            for a in lo..=hi {
                let firsts = self.first.get(&tau, a).to_vec();
                if firsts.is_empty() {
                    continue;
                }
                for (cb, b) in self.second.get(&tau, self.total - a) {
                    for (ca, x) in &firsts {
                        pairs.push((ca.clone(), cb.clone(), x.clone(), b.clone()));
                    }
                }
            }
            pairs.sort_by(|p, q| (&p.0, &p.1).cmp(&(&q.0, &q.1)));
            for (_, _, x, y) in pairs {
                let (gamma, extra) = match (self.spec.kind(), x, y) {
                    (FormKind::NpConp8, Extra::Lambda(lambda), Extra::Lambda(gamma)) => {
                        (gamma, Extra::Lambda(lambda))
                    }
                    (_, Extra::Lambda(gamma), t) => (gamma, t),
                    _ => unreachable!("first stream holds sentences"),
                };
                if let Ok(form) = self.spec.build(&gamma, &extra) {
                    self.ready.push_back(form);
                }
            }
        }
    }
}

impl Iterator for LogicEnumerator {
    type Item = CanonicalForm;

    fn next(&mut self) -> Option<CanonicalForm> {
        self.fill();
        self.ready.pop_front()
    }
}
