use std::collections::HashSet;

use super::{EvalError, Evaluator, MAX_RELATION_TUPLES};
use crate::charsets;
use crate::logic::{check_formula, CharLeaf, Formula};
use crate::structure::{index_tuple, tuple_index, Structure};
use crate::vocab::Vocabulary;

#[derive(Debug, Clone, Copy)]
enum Rel {
    Sym(usize),
    Var(usize),
}

#[derive(Debug, Clone)]
enum Node {
    Const(bool),
    Atom(Rel, Vec<usize>),
    Eq(usize, usize),
    Neq(usize, usize),
    Lt(usize, usize),
    Bit(usize, usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Exists(usize, Box<Node>),
    Forall(usize, Box<Node>),
    SoExists(usize, Box<Node>),
    SoForall(usize, Box<Node>),
    Tc {
        from: Vec<usize>,
        to: Vec<usize>,
        body: Box<Node>,
        src: Vec<usize>,
        dst: Vec<usize>,
    },
    Fix {
        partial: bool,
        rel: usize,
        vars: Vec<usize>,
        body: Box<Node>,
        args: Vec<usize>,
    },
    Char(usize),
}

/// A formula compiled against one vocabulary.
#[derive(Debug, Clone)]
pub struct Compiled {
    vocab: Vocabulary,
    root: Node,
    var_slots: usize,
    rel_arity: Vec<usize>,
    free: usize,
    leaves: Vec<CharLeaf>,
}

struct Builder {
    vars: Vec<(String, usize)>,
    rels: Vec<(String, usize)>,
    var_slots: usize,
    rel_arity: Vec<usize>,
    leaves: Vec<CharLeaf>,
    vocab: Vocabulary,
}

impl Builder {
    fn var(&self, name: &str) -> usize {
        self.vars
            .iter()
            .rev()
            .find(|(v, _)| v == name)
            .map(|(_, s)| *s)
            .expect("checked: variable bound")
    }

    fn vars_of(&self, names: &[String]) -> Vec<usize> {
        names.iter().map(|v| self.var(v)).collect()
    }

    fn bind_vars(&mut self, names: &[String]) -> Vec<usize> {
        names
            .iter()
            .map(|v| {
                let slot = self.var_slots;
                self.var_slots += 1;
                self.vars.push((v.clone(), slot));
                slot
            })
            .collect()
    }

    fn bind_rel(&mut self, name: &str, arity: usize) -> usize {
        let slot = self.rel_arity.len();
        self.rel_arity.push(arity);
        self.rels.push((name.to_string(), slot));
        slot
    }

    fn rel(&self, name: &str) -> Rel {
        if let Some((_, slot)) = self.rels.iter().rev().find(|(r, _)| r == name) {
            return Rel::Var(*slot);
        }
        Rel::Sym(self.vocab.index_of(name).expect("checked: relation known"))
    }

    fn build(&mut self, f: &Formula) -> Node {
        use Formula as F;
        match f {
            F::Atom { rel, args } => Node::Atom(self.rel(rel), self.vars_of(args)),
            F::Eq(a, b) if a == b => Node::Const(true),
            F::Neq(a, b) | F::Lt(a, b) if a == b => Node::Const(false),
            F::Eq(a, b) => Node::Eq(self.var(a), self.var(b)),
            F::Neq(a, b) => Node::Neq(self.var(a), self.var(b)),
            F::Lt(a, b) => Node::Lt(self.var(a), self.var(b)),
            F::Bit(a, b) => Node::Bit(self.var(a), self.var(b)),
            F::Not(a) => negate(self.build(a)),
            F::And(a, b) => conj(self.build(a), self.build(b)),
            F::Or(a, b) => disj(self.build(a), self.build(b)),
            F::Implies(a, b) => disj(negate(self.build(a)), self.build(b)),
            F::Exists(x, a) | F::Forall(x, a) => {
                let mark = self.vars.len();
                let slot = self.bind_vars(std::slice::from_ref(x))[0];
                let body = self.build(a);
                self.vars.truncate(mark);
                match body {
                    Node::Const(b) => Node::Const(b),
                    body if matches!(f, F::Exists(..)) => Node::Exists(slot, Box::new(body)),
                    body => Node::Forall(slot, Box::new(body)),
                }
            }
            F::ExistsSo { rel, arity, body } | F::ForallSo { rel, arity, body } => {
                let slot = self.bind_rel(rel, *arity);
                let inner = self.build(body);
                self.rels.pop();
                match inner {
                    Node::Const(b) => Node::Const(b),
                    inner if matches!(f, F::ExistsSo { .. }) => {
                        Node::SoExists(slot, Box::new(inner))
                    }
                    inner => Node::SoForall(slot, Box::new(inner)),
                }
            }
            F::Tc {
                from,
                to,
                body,
                src,
                dst,
            } => {
                let src = self.vars_of(src);
                let dst = self.vars_of(dst);
                let mark = self.vars.len();
                let from = self.bind_vars(from);
                let to = self.bind_vars(to);
                let body = Box::new(self.build(body));
                self.vars.truncate(mark);
                Node::Tc {
                    from,
                    to,
                    body,
                    src,
                    dst,
                }
            }
            F::Lfp(fp) | F::Pfp(fp) => {
                let args = self.vars_of(&fp.args);
                let rel = self.bind_rel(&fp.rel, fp.vars.len());
                let mark = self.vars.len();
                let vars = self.bind_vars(&fp.vars);
                let body = Box::new(self.build(&fp.body));
                self.vars.truncate(mark);
                self.rels.pop();
                Node::Fix {
                    partial: matches!(f, F::Pfp(_)),
                    rel,
                    vars,
                    body,
                    args,
                }
            }
            F::Char(leaf) => {
                let idx = match self.leaves.iter().position(|l| l == leaf) {
                    Some(i) => i,
                    None => {
                        self.leaves.push(leaf.clone());
                        self.leaves.len() - 1
                    }
                };
                Node::Char(idx)
            }
        }
    }
}

fn negate(a: Node) -> Node {
    match a {
        Node::Const(b) => Node::Const(!b),
        a => Node::Not(Box::new(a)),
    }
}

fn conj(a: Node, b: Node) -> Node {
    match (a, b) {
        (Node::Const(false), _) | (_, Node::Const(false)) => Node::Const(false),
        (Node::Const(true), x) | (x, Node::Const(true)) => x,
        (a, b) => Node::And(Box::new(a), Box::new(b)),
    }
}

fn disj(a: Node, b: Node) -> Node {
    match (a, b) {
        (Node::Const(true), _) | (_, Node::Const(true)) => Node::Const(true),
        (Node::Const(false), x) | (x, Node::Const(false)) => x,
        (a, b) => Node::Or(Box::new(a), Box::new(b)),
    }
}

struct Env<'a> {
    a: &'a Structure,
    n: usize,
    vars: Vec<usize>,
    rels: Vec<Vec<bool>>,
    leaf_values: Vec<Option<bool>>,
    ev: &'a Evaluator,
    budget: u32,
}

impl Compiled {
    /// Compiles a sentence over `vocab`.
    pub fn sentence(f: &Formula, vocab: &Vocabulary) -> Result<Self, EvalError> {
        Compiled::with_free(f, vocab, &[])
    }

    /// Compiles a formula whose free variables are among `free`; values for
    /// them are passed positionally to [`Compiled::eval_with`].
    pub fn with_free(f: &Formula, vocab: &Vocabulary, free: &[String]) -> Result<Self, EvalError> {
        check_formula(f, vocab, free)?;
        let mut b = Builder {
            vars: Vec::new(),
            rels: Vec::new(),
            var_slots: 0,
            rel_arity: Vec::new(),
            leaves: Vec::new(),
            vocab: vocab.clone(),
        };
        b.bind_vars(free);
        let root = b.build(f);
        Ok(Compiled {
            vocab: vocab.clone(),
            root,
            var_slots: b.var_slots,
            rel_arity: b.rel_arity,
            free: free.len(),
            leaves: b.leaves,
        })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn eval(&self, a: &Structure, ev: &Evaluator, budget: u32) -> Result<bool, EvalError> {
        self.eval_with(a, &[], ev, budget)
    }

    pub fn eval_with(
        &self,
        a: &Structure,
        free: &[usize],
        ev: &Evaluator,
        budget: u32,
    ) -> Result<bool, EvalError> {
        assert_eq!(
            a.vocab(),
            &self.vocab,
            "structure over a different vocabulary"
        );
        assert_eq!(free.len(), self.free, "wrong number of free values");
        let mut vars = vec![0; self.var_slots];
        vars[..free.len()].copy_from_slice(free);
        let mut env = Env {
            a,
            n: a.n(),
            vars,
            rels: self.rel_arity.iter().map(|_| Vec::new()).collect(),
            leaf_values: vec![None; self.leaves.len()],
            ev,
            budget,
        };
        self.node(&self.root, &mut env)
    }

    fn node(&self, node: &Node, env: &mut Env<'_>) -> Result<bool, EvalError> {
        Ok(match node {
            Node::Const(b) => *b,
            Node::Atom(rel, args) => {
                let idx = args.iter().fold(0, |acc, &s| acc * env.n + env.vars[s]);
                match rel {
                    Rel::Sym(i) => env.a.relation(*i)[idx],
                    Rel::Var(s) => env.rels[*s][idx],
                }
            }
            Node::Eq(a, b) => env.vars[*a] == env.vars[*b],
            Node::Neq(a, b) => env.vars[*a] != env.vars[*b],
            Node::Lt(a, b) => env.vars[*a] < env.vars[*b],
            Node::Bit(a, b) => {
                let (x, y) = (env.vars[*a], env.vars[*b]);
                y < usize::BITS as usize && (x >> y) & 1 == 1
            }
            Node::Not(a) => !self.node(a, env)?,
            Node::And(a, b) => self.node(a, env)? && self.node(b, env)?,
            Node::Or(a, b) => self.node(a, env)? || self.node(b, env)?,
            Node::Exists(slot, body) => {
                for v in 0..env.n {
                    env.vars[*slot] = v;
                    if self.node(body, env)? {
                        return Ok(true);
                    }
                }
                false
            }
            Node::Forall(slot, body) => {
                for v in 0..env.n {
                    env.vars[*slot] = v;
                    if !self.node(body, env)? {
                        return Ok(false);
                    }
                }
                true
            }
            Node::SoExists(slot, body) | Node::SoForall(slot, body) => {
                let want = matches!(node, Node::SoExists(..));
                let size = env.n.pow(self.rel_arity[*slot] as u32);
                if size > MAX_RELATION_TUPLES {
                    return Err(EvalError::Infeasible(size));
                }
                env.rels[*slot] = vec![false; size];
                loop {
                    if self.node(body, env)? == want {
                        return Ok(want);
                    }
                    let bits = &mut env.rels[*slot];
                    match bits.iter().rposition(|&b| !b) {
                        Some(i) => {
                            bits[i] = true;
                            bits[i + 1..].iter_mut().for_each(|b| *b = false);
                        }
                        None => break,
                    }
                }
                !want
            }
            Node::Tc {
                from,
                to,
                body,
                src,
                dst,
            } => self.closure(from, to, body, src, dst, env)?,
            Node::Fix {
                partial,
                rel,
                vars,
                body,
                args,
            } => {
                let k = vars.len();
                let size = env.n.pow(k as u32);
                let mut cur = vec![false; size];
                let mut seen = HashSet::new();
                loop {
                    env.rels[*rel] = cur.clone();
                    let mut next = vec![false; size];
                    for (idx, slot) in next.iter_mut().enumerate() {
                        for (s, v) in vars.iter().zip(index_tuple(env.n, k, idx)) {
                            env.vars[*s] = v;
                        }
                        *slot = self.node(body, env)?;
                    }
                    if next == cur {
                        break;
                    }
                    if *partial && !seen.insert(cur.clone()) {
                        // the stage sequence cycles without a fixpoint
                        cur = vec![false; size];
                        break;
                    }
                    cur = next;
                }
                let at: Vec<usize> = args.iter().map(|&s| env.vars[s]).collect();
                cur[tuple_index(env.n, &at)]
            }
            Node::Char(i) => match env.leaf_values[*i] {
                Some(v) => v,
                None => {
                    if env.budget == 0 {
                        return Err(EvalError::RecursionBudgetExhausted);
                    }
                    let len = env.a.encode_bin().len();
                    let v = charsets::leaf_holds(
                        env.ev,
                        &self.leaves[*i],
                        &self.vocab,
                        len,
                        env.budget - 1,
                    )?;
                    env.leaf_values[*i] = Some(v);
                    v
                }
            },
        })
    }

    fn closure(
        &self,
        from: &[usize],
        to: &[usize],
        body: &Node,
        src: &[usize],
        dst: &[usize],
        env: &mut Env<'_>,
    ) -> Result<bool, EvalError> {
        let k = from.len();
        let n = env.n;
        let start: Vec<usize> = src.iter().map(|&s| env.vars[s]).collect();
        let goal: Vec<usize> = dst.iter().map(|&s| env.vars[s]).collect();
        let (start, goal) = (tuple_index(n, &start), tuple_index(n, &goal));
        if start == goal {
            return Ok(true);
        }
        let size = n.pow(k as u32);
        let mut visited = vec![false; size];
        visited[start] = true;
        let mut queue = vec![start];
        while let Some(u) = queue.pop() {
            let ut = index_tuple(n, k, u);
            for v in 0..size {
                if visited[v] {
                    continue;
                }
                for (s, x) in from.iter().zip(&ut) {
                    env.vars[*s] = *x;
                }
                for (s, x) in to.iter().zip(index_tuple(n, k, v)) {
                    env.vars[*s] = x;
                }
                if self.node(body, env)? {
                    if v == goal {
                        return Ok(true);
                    }
                    visited[v] = true;
                    queue.push(v);
                }
            }
        }
        Ok(false)
    }
}
