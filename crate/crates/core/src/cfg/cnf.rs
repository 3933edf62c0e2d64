use std::collections::{BTreeSet, HashSet, VecDeque};

use super::{AlphabetMismatch, GSym, Grammar, Named};

struct Work {
    names: Vec<String>,
    taken: HashSet<String>,
    rules: BTreeSet<(usize, Vec<GSym>)>,
    start: usize,
}

impl Work {
    fn fresh(&mut self, base: &str) -> usize {
        let name = (0..)
            .map(|j| format!("{base}{j}"))
            .find(|n| !self.taken.contains(n))
            .expect("unbounded");
        self.taken.insert(name.clone());
        self.names.push(name);
        self.names.len() - 1
    }

    fn nullable(&self) -> Vec<bool> {
        let mut null = vec![false; self.names.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for (a, rhs) in &self.rules {
                if !null[*a] && rhs.iter().all(|s| matches!(s, GSym::N(b) if null[*b])) {
                    null[*a] = true;
                    changed = true;
                }
            }
        }
        null
    }
}

/// Language-equivalent grammar in Chomsky normal form. The start symbol is
/// fresh, never occurs on a right-hand side, and is the only symbol that may
/// derive the empty string. Useless symbols are dropped.
pub fn to_cnf(g: &Grammar) -> Grammar {
    let mut w = Work {
        names: g.nonterminals.clone(),
        taken: g.nonterminals.iter().cloned().collect(),
        rules: BTreeSet::new(),
        start: 0,
    };
    for (a, rs) in g.rules.iter().enumerate() {
        for r in rs {
            w.rules.insert((a, r.clone()));
        }
    }
    let s0 = w.fresh("S");
    w.rules.insert((s0, vec![GSym::N(g.start)]));
    w.start = s0;

    // terminals inside long rules get their own nonterminal
    let mut term_nt: Vec<Option<usize>> = vec![None; g.terminals.len()];
    let mut rules = BTreeSet::new();
    for (a, rhs) in std::mem::take(&mut w.rules) {
        if rhs.len() < 2 {
            rules.insert((a, rhs));
            continue;
        }
        let mut body = Vec::with_capacity(rhs.len());
        for s in rhs {
            body.push(match s {
                GSym::T(i) => {
                    let t = match term_nt[i] {
                        Some(t) => t,
                        None => {
                            let t = w.fresh("T");
                            rules.insert((t, vec![GSym::T(i)]));
                            term_nt[i] = Some(t);
                            t
                        }
                    };
                    GSym::N(t)
                }
                n => n,
            });
        }
        rules.insert((a, body));
    }

    // split long rules into chains of binary ones
    w.rules = BTreeSet::new();
    for (a, rhs) in rules {
        if rhs.len() <= 2 {
            w.rules.insert((a, rhs));
            continue;
        }
        let mut lhs = a;
        for k in 0..rhs.len() - 2 {
            let next = w.fresh("X");
            w.rules.insert((lhs, vec![rhs[k], GSym::N(next)]));
            lhs = next;
        }
        w.rules.insert((lhs, rhs[rhs.len() - 2..].to_vec()));
    }

    // remove empty rules, keeping one for the start symbol if needed
    let null = w.nullable();
    let mut rules = BTreeSet::new();
    for (a, rhs) in &w.rules {
        let opt: Vec<usize> = (0..rhs.len())
            .filter(|&i| matches!(rhs[i], GSym::N(b) if null[b]))
            .collect();
        for mask in 0u32..(1 << opt.len()) {
            let body: Vec<GSym> = (0..rhs.len())
                .filter(|i| {
                    opt.iter()
                        .position(|o| o == i)
                        .is_none_or(|bit| mask & (1 << bit) == 0)
                })
                .map(|i| rhs[i])
                .collect();
            if !body.is_empty() {
                rules.insert((*a, body));
            }
        }
    }
    if null[s0] {
        rules.insert((s0, Vec::new()));
    }

    // remove unit rules
    let n = w.names.len();
    let mut units = vec![Vec::new(); n];
    for (a, rhs) in &rules {
        if let [GSym::N(b)] = rhs.as_slice() {
            units[*a].push(*b);
        }
    }
    let mut by_lhs = vec![Vec::new(); n];
    for (a, rhs) in &rules {
        if !matches!(rhs.as_slice(), [GSym::N(_)]) {
            by_lhs[*a].push(rhs.clone());
        }
    }
    let mut w_rules = BTreeSet::new();
    for a in 0..n {
        let mut seen = vec![false; n];
        seen[a] = true;
        let mut queue = VecDeque::from([a]);
        while let Some(b) = queue.pop_front() {
            for rhs in &by_lhs[b] {
                w_rules.insert((a, rhs.clone()));
            }
            for &c in &units[b] {
                if !seen[c] {
                    seen[c] = true;
                    queue.push_back(c);
                }
            }
        }
    }

    // keep generating, reachable symbols only
    let mut generating = vec![false; n];
    let mut changed = true;
    while changed {
        changed = false;
        for (a, rhs) in &w_rules {
            if !generating[*a]
                && rhs
                    .iter()
                    .all(|s| matches!(s, GSym::T(_)) || matches!(s, GSym::N(b) if generating[*b]))
            {
                generating[*a] = true;
                changed = true;
            }
        }
    }
    w_rules.retain(|(_, rhs)| {
        rhs.iter()
            .all(|s| matches!(s, GSym::T(_)) || matches!(s, GSym::N(b) if generating[*b]))
    });
    let mut reachable = vec![false; n];
    reachable[s0] = true;
    let mut stack = vec![s0];
    while let Some(a) = stack.pop() {
        for (_, rhs) in w_rules
            .range((a, Vec::new())..)
            .take_while(|(l, _)| *l == a)
        {
            for s in rhs {
                if let GSym::N(b) = *s {
                    if !reachable[b] {
                        reachable[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
    }
    let productions: Vec<(String, Vec<Named>)> = w_rules
        .into_iter()
        .filter(|(a, _)| reachable[*a])
        .map(|(a, rhs)| {
            let body = rhs
                .into_iter()
                .map(|s| match s {
                    GSym::T(i) => Named::T(g.terminals[i]),
                    GSym::N(b) => Named::N(w.names[b].clone()),
                })
                .collect();
            (w.names[a].clone(), body)
        })
        .collect();
    Grammar::new(g.terminals.iter().copied(), &w.names[s0], &productions)
        .expect("names and terminals come from a valid grammar")
}

/// A grammar prepared for CYK parsing.
#[derive(Debug, Clone)]
pub struct Cnf {
    grammar: Grammar,
    binary: Vec<(usize, usize, usize)>,
    by_terminal: Vec<Vec<usize>>,
    empty: bool,
}

impl Cnf {
    pub fn new(g: &Grammar) -> Self {
        let grammar = to_cnf(g);
        let mut binary = Vec::new();
        let mut by_terminal = vec![Vec::new(); grammar.terminals.len()];
        let mut empty = false;
        for (a, rs) in grammar.rules.iter().enumerate() {
            for r in rs {
                match r.as_slice() {
                    [] => empty = true,
                    [GSym::T(t)] => by_terminal[*t].push(a),
                    [GSym::N(b), GSym::N(c)] => binary.push((a, *b, *c)),
                    _ => unreachable!("to_cnf output"),
                }
            }
        }
        Cnf {
            grammar,
            binary,
            by_terminal,
            empty,
        }
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn member(&self, w: &str) -> Result<bool, AlphabetMismatch> {
        let word: Vec<usize> = w
            .chars()
            .map(|c| self.grammar.terminal_index(c))
            .collect::<Result<_, _>>()?;
        Ok(self.member_indices(&word))
    }

    /// Membership of a word given as terminal indices.
    pub fn member_indices(&self, word: &[usize]) -> bool {
        let len = word.len();
        if len == 0 {
            return self.empty;
        }
        let nn = self.grammar.nonterminals.len();
        // table[l-1][i]: nonterminals deriving word[i..i+l]
        let mut table: Vec<Vec<Vec<bool>>> = Vec::with_capacity(len);
        table.push(
            word.iter()
                .map(|&t| {
                    let mut row = vec![false; nn];
                    for &a in &self.by_terminal[t] {
                        row[a] = true;
                    }
                    row
                })
                .collect(),
        );
        for l in 2..=len {
            let mut level = Vec::with_capacity(len - l + 1);
            for i in 0..=len - l {
                let mut row = vec![false; nn];
                for split in 1..l {
                    let left = &table[split - 1][i];
                    let right = &table[l - split - 1][i + split];
                    for &(a, b, c) in &self.binary {
                        if left[b] && right[c] {
                            row[a] = true;
                        }
                    }
                }
                level.push(row);
            }
            table.push(level);
        }
        table[len - 1][0][self.grammar.start]
    }

    /// Least word of length at most `len_max`, in length-lexicographic order
    /// over the sorted alphabet, that the grammar does not generate.
    pub fn find_missing(&self, len_max: usize) -> Option<String> {
        let k = self.grammar.terminals.len();
        for len in 0..=len_max {
            let mut word = vec![0usize; len];
            loop {
                if !self.member_indices(&word) {
                    return Some(word.iter().map(|&t| self.grammar.terminals[t]).collect());
                }
                // odometer increment, last position fastest
                let mut i = len;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    word[i] += 1;
                    if word[i] < k {
                        break;
                    }
                    word[i] = 0;
                    if i == 0 {
                        i = usize::MAX;
                        break;
                    }
                }
                if len == 0 || i == usize::MAX {
                    break;
                }
            }
        }
        None
    }
}

pub fn cyk_member(g: &Grammar, w: &str) -> Result<bool, AlphabetMismatch> {
    Cnf::new(g).member(w)
}

pub fn find_missing(g: &Grammar, len_max: usize) -> Option<String> {
    Cnf::new(g).find_missing(len_max)
}
