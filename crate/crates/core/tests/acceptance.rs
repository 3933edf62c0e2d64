//! Acceptance suite. Runs as a plain binary so every criterion reports a
//! pass/fail line even when an earlier one fails.

mod common;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;

use canonlogic::aristotelian::{benc, reconstruct, uenc_length};
use canonlogic::cfg::{cyk_member, Cnf, Grammar};
use canonlogic::charsets::{
    char_cfg, char_npconp, char_ord, char_unord, member_s_cfg, member_s_npconp, member_s_ord,
    member_s_unord,
};
use canonlogic::eval::{Compiled, Evaluator};
use canonlogic::forms::{Class, Extra, FormKind, FormSpec};
use canonlogic::logic::{apply_t_ord, apply_t_unord, psi_encode, psi_recognize, Formula};
use canonlogic::machine::{is_reduction_upto, library, Kind, Machine};
use canonlogic::{is_isomorphic, Bits, Structure, Vocabulary};

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("isomorphism iff equal unary length", c1_isomorphism),
        ("reconstruction round trip", c2_reconstruct),
        ("encoding length bounds", c3_bounds),
        ("model checker vs naive evaluator", c4_model_checker),
        ("vocabulary transport", c5_transport),
        ("characteristic sets", c6_charsets),
        ("correct and broken pairs", c7_pairs),
        ("recognition of forms", c8_recognition),
        ("psi sentences", c9_psi),
        ("grammar membership", c10_cfg),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let t = start.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({t:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({t:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------------------
// Aristotelian corpus shared by 1-3.

fn pattern_counts(a: &Structure) -> Vec<usize> {
    let m = a.vocab().len();
    let mut counts = vec![0; 1 << m];
    for x in 0..a.n() {
        let pat = (0..m).fold(0, |acc, i| acc | (a.holds(i, &[x]) as usize) << i);
        counts[pat] += 1;
    }
    counts
}

/// All m=1 structures with n in 2..=4, and 500 random m=2 pairs with n <= 6,
/// half of them permuted copies.
fn corpus() -> (Vec<Structure>, Vec<(Structure, Structure)>) {
    let one = v("P:1");
    let singles: Vec<Structure> = (2..=4).flat_map(|n| all_structures(&one, n)).collect();
    let two = v("P:1 Q:1");
    let mut r = rng(1);
    let pairs = (0..500)
        .map(|i| {
            let n = r.gen_range(2..=6);
            let a = random_structure(&mut r, &two, n, 0.5);
            let b = if i % 2 == 0 {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut r);
                a.permuted(&perm)
            } else {
                {
                    let m = r.gen_range(2..=6);
                    random_structure(&mut r, &two, m, 0.5)
                }
            };
            (a, b)
        })
        .collect();
    (singles, pairs)
}

fn c1_isomorphism() -> Outcome {
    let start = Instant::now();
    let (singles, random) = corpus();
    let mut pairs: Vec<(&Structure, &Structure)> = Vec::new();
    for i in 0..singles.len() {
        for j in i + 1..singles.len() {
            pairs.push((&singles[i], &singles[j]));
        }
    }
    ensure!(
        singles.len() == 28 && pairs.len() == 378,
        "corpus has {} structures",
        singles.len()
    );
    pairs.extend(random.iter().map(|(a, b)| (a, b)));
    let mut iso = 0;
    for (a, b) in &pairs {
        let truth = a.n() == b.n() && pattern_counts(a) == pattern_counts(b);
        let lib = is_isomorphic(a, b).unwrap();
        let same = uenc_length(a).unwrap() == uenc_length(b).unwrap();
        ensure!(truth == lib && lib == same, "disagreement on\n{a}\n{b}");
        iso += truth as usize;
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(10), "took {t:?}");
    Ok(format!("{} pairs, {iso} isomorphic", pairs.len()))
}

fn c2_reconstruct() -> Outcome {
    let (singles, random) = corpus();
    let all: Vec<&Structure> = singles
        .iter()
        .chain(random.iter().flat_map(|(a, b)| [a, b]))
        .collect();
    for a in &all {
        let b = reconstruct(a.vocab(), &benc(a).unwrap()).unwrap();
        ensure!(is_isomorphic(a, &b).unwrap(), "not isomorphic:\n{a}\n{b}");
        ensure!(
            pattern_counts(a) == pattern_counts(&b),
            "patterns differ:\n{a}"
        );
        ensure!(
            uenc_length(a).unwrap() == uenc_length(&b).unwrap(),
            "lengths differ:\n{a}"
        );
    }
    Ok(format!("{} structures", all.len()))
}

fn log2_big(x: &BigUint) -> f64 {
    let b = x.bits();
    if b <= 53 {
        return (x.to_u64_digits().first().copied().unwrap_or(0) as f64).log2();
    }
    let top: BigUint = x >> (b - 53);
    (top.to_u64_digits()[0] as f64).log2() + (b - 53) as f64
}

fn c3_bounds() -> Outcome {
    let (singles, random) = corpus();
    let all: Vec<&Structure> = singles
        .iter()
        .chain(random.iter().flat_map(|(a, b)| [a, b]))
        .collect();
    let mut tightest = f64::INFINITY;
    for a in &all {
        let m = a.vocab().len() as f64;
        let n = a.n() as f64;
        let pm = 2f64.powf(m);
        let lb = benc(a).unwrap().bits().len() as f64;
        let benc_max = 1.0 + pm * (m + n.log2() + 2.0 * n.log2().log2() + 7.0);
        ensure!(lb <= benc_max, "benc length {lb} above {benc_max} for\n{a}");
        let lu = log2_big(&uenc_length(a).unwrap());
        let uenc_max = (m + 7.0) * pm + 1.0 + pm * (n * n.log2().powi(2)).log2();
        ensure!(
            lu < uenc_max,
            "log2 unary length {lu} not below {uenc_max} for\n{a}"
        );
        tightest = tightest.min(benc_max - lb);
    }
    Ok(format!(
        "{} structures, least benc slack {tightest:.2} bits",
        all.len()
    ))
}

// ---------------------------------------------------------------------------
// 4. Model checking.

/// FO formulas over `{E²}` of exactly `size` nodes whose free variables are
/// among `x0..x{k-1}`; quantifiers bind `x{k}`.
fn fo_formulas(
    size: usize,
    k: usize,
    memo: &mut HashMap<(usize, usize), Vec<Formula>>,
) -> Vec<Formula> {
    if let Some(v) = memo.get(&(size, k)) {
        return v.clone();
    }
    let var = |i: usize| format!("x{i}");
    let mut out = Vec::new();
    if size == 1 {
        for i in 0..k {
            for j in 0..k {
                out.push(Formula::Atom {
                    rel: "E".into(),
                    args: vec![var(i), var(j)],
                });
                out.push(Formula::Eq(var(i), var(j)));
                out.push(Formula::Neq(var(i), var(j)));
            }
        }
    } else {
        for g in fo_formulas(size - 1, k, memo) {
            out.push(Formula::Not(Box::new(g)));
        }
        for g in fo_formulas(size - 1, k + 1, memo) {
            out.push(Formula::Exists(var(k), Box::new(g.clone())));
            out.push(Formula::Forall(var(k), Box::new(g)));
        }
        for left in 1..size - 1 {
            let ls = fo_formulas(left, k, memo);
            let rs = fo_formulas(size - 1 - left, k, memo);
            for a in &ls {
                for b in &rs {
                    let (a, b) = (Box::new(a.clone()), Box::new(b.clone()));
                    out.push(Formula::And(a.clone(), b.clone()));
                    out.push(Formula::Or(a.clone(), b.clone()));
                    out.push(Formula::Implies(a, b));
                }
            }
        }
    }
    memo.insert((size, k), out.clone());
    out
}

fn cycle(n: usize) -> Structure {
    let mut a = Structure::empty(v("E:2"), n).unwrap();
    for i in 0..n {
        a.insert("E", &[i, (i + 1) % n]).unwrap();
        a.insert("E", &[(i + 1) % n, i]).unwrap();
    }
    a
}

fn two_colorable_brute(a: &Structure) -> bool {
    let e = edges_of(a, "E");
    (0u32..1 << a.n()).any(|c| e.iter().all(|&(x, y)| (c >> x & 1) != (c >> y & 1)))
}

fn c4_model_checker() -> Outcome {
    let start = Instant::now();
    let ev = Evaluator::new(8, 1);
    let tau = v("E:2");
    let structures: Vec<Structure> = (2..=3).flat_map(|n| all_structures(&tau, n)).collect();
    ensure!(structures.len() == 528, "{} structures", structures.len());
    let mut memo = HashMap::new();
    let sentences: Vec<Formula> = (1..=6).flat_map(|s| fo_formulas(s, 0, &mut memo)).collect();
    for f in &sentences {
        let c = Compiled::sentence(f, &tau).map_err(|e| format!("{f}: {e}"))?;
        for a in &structures {
            let lib = c.eval(a, &ev, 8).unwrap();
            ensure!(lib == naive_models(a, f), "{f} on\n{a}");
        }
    }

    let two_col = p("EX:1 Ax Ay (E(x,y) -> ((X(x) & ~X(y)) | (~X(x) & X(y))))");
    for n in 3..=6 {
        let c = cycle(n);
        let lib = ev.models(&c, &two_col).unwrap();
        ensure!(
            lib == two_colorable_brute(&c) && lib == (n % 2 == 0),
            "2-colouring of C{n}"
        );
    }

    let reach = [
        ("TC[u,v: E(u,v)](x,y)", true),
        ("LFP[Q,u,v: (u = v | Ez (Q(u,z) & E(z,v)))](x,y)", true),
        ("LFP[Q,u,v: (E(u,v) | Ez (Q(u,z) & E(z,v)))](x,y)", false),
    ];
    let compiled: Vec<(Compiled, Formula, bool)> = reach
        .iter()
        .map(|(s, refl)| {
            let f = p(s);
            let c = Compiled::with_free(&f, &tau, &["x".into(), "y".into()]).unwrap();
            (c, f, *refl)
        })
        .collect();
    let mut r = rng(4);
    for _ in 0..20 {
        let n = r.gen_range(3..=7);
        let a = random_structure(&mut r, &tau, n, 0.2);
        let e = edges_of(&a, "E");
        let rt = rt_closure(n, &e);
        for x in 0..n {
            for y in 0..n {
                let plus = (0..n).any(|z| rt[x][z] && e.contains(&(z, y)));
                for (c, f, refl) in &compiled {
                    let want = if *refl { rt[x][y] } else { plus };
                    let got = c.eval_with(&a, &[x, y], &ev, 8).unwrap();
                    ensure!(got == want, "{f} at ({x},{y}) on\n{a}");
                }
            }
        }
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(120), "took {t:?}");
    Ok(format!(
        "{} FO sentences x 528 structures, 4 cycles, 20 digraphs",
        sentences.len()
    ))
}

// ---------------------------------------------------------------------------
// 5. Transport.

const ORDERED_UPSILON: [&str; 10] = [
    "Ex R(x)",
    "Ax R(x)",
    "Ex Ey (x < y & (R(x) & ~R(y)))",
    "Ex Ay (R(x) & (x < y | x = y))",
    "Ax Ay ((R(x) & x < y) -> R(y))",
    "Ex Ey (x != y & (R(x) & R(y)))",
    "Ex Ey (Az ((x < z | x = z) & (z < y | z = y)) & TC[u,v: (u < v & (R(u) | R(v)))](x,y))",
    "Ax LFP[Q,u: (R(u) | Ev (u < v & Q(v)))](x)",
    "EX:1 (Ax (X(x) -> R(x)) & Ex Ey (x < y & (X(x) & ~X(y))))",
    "Ax Ey (x < y | R(y))",
];

const UNORDERED_UPSILON: [&str; 10] = [
    "Ex Ey R(x,y)",
    "Ax Ay (R(x,y) -> R(y,x))",
    "Ax Ey R(x,y)",
    "Ex R(x,x)",
    "Ax Ay Az ((R(x,y) & R(y,z)) -> R(x,z))",
    "Ex Ay (x != y -> R(x,y))",
    "Ax Ay TC[u,v: R(u,v)](x,y)",
    "Ax LFP[Q,u: (R(u,u) | Ev (R(u,v) & Q(v)))](x)",
    "EX:1 Ax Ay (R(x,y) -> ((X(x) & ~X(y)) | (~X(x) & X(y))))",
    "Ex Ey Ez ((x != y & (y != z & x != z)) & (R(x,y) & (R(y,z) & R(z,x))))",
];

/// `B` over `tau` carrying `A`'s relation in its designated symbol, padded
/// with element 0 in the leading (ordered) or trailing (unordered)
/// positions; every other symbol is empty.
fn padded(a: &Structure, tau: &Vocabulary, ordered: bool) -> Structure {
    let mut b = Structure::empty(tau.clone(), a.n()).unwrap();
    let sym = if ordered {
        tau.symbols()[0].clone()
    } else {
        tau.symbols().iter().find(|s| s.arity > 1).unwrap().clone()
    };
    let i = tau.index_of(&sym.name).unwrap();
    for t in a.tuples(0) {
        let pad = vec![0; sym.arity - t.len()];
        let full: Vec<usize> = if ordered {
            pad.iter().chain(&t).copied().collect()
        } else {
            t.iter().chain(&pad).copied().collect()
        };
        b.set(i, &full, true);
    }
    b
}

fn c5_transport() -> Outcome {
    let ev = Evaluator::new(8, 1);
    let mut checked = 0usize;
    let ord_src = Vocabulary::sigma_ordered();
    let ord_tau = v("E:2 <");
    let sources: Vec<Structure> = (2..=4).flat_map(|n| all_structures(&ord_src, n)).collect();
    for u in ORDERED_UPSILON {
        let u = p(u);
        let ut = apply_t_ord(&u, &ord_tau).map_err(|e| e.to_string())?;
        let (cu, ct) = (
            Compiled::sentence(&u, &ord_src).unwrap(),
            Compiled::sentence(&ut, &ord_tau).unwrap(),
        );
        for a in &sources {
            let b = padded(a, &ord_tau, true);
            ensure!(
                cu.eval(a, &ev, 8).unwrap() == ct.eval(&b, &ev, 8).unwrap(),
                "{u} on\n{a}"
            );
            checked += 1;
        }
    }
    let src = Vocabulary::sigma();
    let targets = [v("P:1 E:2"), v("H:3")];
    let sources: Vec<Structure> = (2..=4).flat_map(|n| all_structures(&src, n)).collect();
    for u in UNORDERED_UPSILON {
        let u = p(u);
        let cu = Compiled::sentence(&u, &src).unwrap();
        let truth: Vec<bool> = sources
            .iter()
            .map(|a| cu.eval(a, &ev, 8).unwrap())
            .collect();
        for tau in &targets {
            let ut = apply_t_unord(&u, tau).map_err(|e| e.to_string())?;
            let ct = Compiled::sentence(&ut, tau).unwrap();
            for (a, &want) in sources.iter().zip(&truth) {
                let b = padded(a, tau, false);
                ensure!(
                    ct.eval(&b, &ev, 8).unwrap() == want,
                    "{ut} over {tau} on\n{a}"
                );
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} source/target pairs"))
}

// ---------------------------------------------------------------------------
// 6. Characteristic sets.

/// Every structure of size `lo..=hi` is judged correctly by a machine with
/// constant verdict `accepts`: the set definition, evaluated naively.
fn constant_machine_condition(tau: &Vocabulary, accepts: bool, target: &Formula, hi: u64) -> bool {
    (2..=hi as usize).all(|n| {
        all_structures(tau, n)
            .iter()
            .all(|b| accepts == naive_models(b, target))
    })
}

fn c6_charsets() -> Outcome {
    let ev = Evaluator::new(8, 1);
    let ord_tau = v("E:2 <");
    let unord_tau = v("E:2");

    // identity reduction with Γ = Υτ
    let ut_ord = apply_t_ord(&p("Ex R(x)"), &ord_tau).unwrap();
    let ut_unord = apply_t_unord(&p("Ex Ey R(x,y)"), &unord_tau).unwrap();
    let id = library::copy(Kind::Polytime);
    let valid = [
        (char_ord(&ut_ord, &id, &ut_ord).unwrap(), &ord_tau),
        (char_unord(&ut_unord, &id, &ut_unord).unwrap(), &unord_tau),
        (
            char_npconp(&p("Ax ~E(x,x)"), &p("Ex E(x,x)")).unwrap(),
            &unord_tau,
        ),
        (
            char_cfg(&"S -> 0 S | 1 S | eps".parse::<Grammar>().unwrap()),
            &unord_tau,
        ),
    ];
    for (phi, tau) in &valid {
        if let Some(a) = ev.valid_upto(phi, tau, 4).unwrap() {
            return Err(format!("{} fails on\n{a}", phi));
        }
    }

    // constant machines against the literal definition
    let targets = [
        p("Ex x = x"),
        p("Ex x != x"),
        p("Ex Ey Ez (x != y & (y != z & x != z))"),
        p("Ex Ey E(x,y)"),
    ];
    let mut verdicts = 0usize;
    let ord_all: Vec<Structure> = (2..=4).flat_map(|n| all_structures(&ord_tau, n)).collect();
    let unord_all: Vec<Structure> = (2..=4)
        .flat_map(|n| all_structures(&unord_tau, n))
        .collect();
    for accepts in [false, true] {
        let t = if accepts {
            library::always_accept(Kind::Polytime)
        } else {
            library::always_reject(Kind::Polytime)
        };
        for target in &targets {
            for (tau, all, depth, ordered) in [
                (&ord_tau, &ord_all, 3, true),
                (&unord_tau, &unord_all, 2, false),
            ] {
                let mut literal: HashMap<u64, bool> = HashMap::new();
                let mut by_len: BTreeMap<usize, bool> = BTreeMap::new();
                for a in all.iter() {
                    let len = a.encode_bin().len();
                    let bound = ell_k(len as u64, depth);
                    let want = *literal
                        .entry(bound)
                        .or_insert_with(|| constant_machine_condition(tau, accepts, target, bound));
                    let got = if ordered {
                        member_s_ord(a, target, &t, target).unwrap()
                    } else {
                        member_s_unord(a, target, &t, target).unwrap()
                    };
                    ensure!(got == want, "{target} accepts={accepts} on\n{a}");
                    let prev = *by_len.entry(len).or_insert(got);
                    ensure!(prev == got, "verdict differs within encoding length {len}");
                    verdicts += 1;
                }
            }
        }
    }
    // complement and grammar sets, same check
    let lambda = p("(Ax ~E(x,x) & ~(Ex Ey Ez (x != y & (y != z & x != z))))");
    let gamma = p("Ex E(x,x)");
    for a in unord_all.iter().filter(|a| a.n() < 4) {
        let bound = ell_k(a.encode_bin().len() as u64, 2);
        let want = (2..=bound as usize).all(|n| {
            all_structures(&unord_tau, n)
                .iter()
                .all(|b| naive_models(b, &lambda) != naive_models(b, &gamma))
        });
        ensure!(
            member_s_npconp(a, &lambda, &gamma).unwrap() == want,
            "complement set on\n{a}"
        );
        verdicts += 1;
    }
    Ok(format!(
        "4 sentences valid to n=4, {verdicts} membership verdicts"
    ))
}

// ---------------------------------------------------------------------------
// 7. Correct and broken pairs.

fn least_violation(t: &Machine, gamma: &Formula, target: &Formula, tau: &Vocabulary) -> usize {
    is_reduction_upto(t, gamma, target, tau, 4)
        .unwrap()
        .map_or(usize::MAX, |b| b.n())
}

fn depth_of(kind: FormKind) -> u32 {
    match kind {
        FormKind::Ord2 | FormKind::Ord5 => 3,
        _ => 2,
    }
}

fn c7_pairs() -> Outcome {
    let ev = Evaluator::new(8, 1);
    let ord_tau = v("E:2 <");
    let unord_tau = v("E:2");
    let mut forms = 0;

    // correct pairs: identity reduction, Γ = Υτ
    for kind in [
        FormKind::Ord2,
        FormKind::Ord5,
        FormKind::Unord4,
        FormKind::Unord6,
    ] {
        let (tau, u) = if kind.ordered() == Some(true) {
            (&ord_tau, p("Ex R(x)"))
        } else {
            (&unord_tau, p("Ex Ey R(x,y)"))
        };
        let spec = FormSpec::new(kind, Class::Np, tau, Some(&u)).unwrap();
        let gamma = spec.upsilon_tau().unwrap().clone();
        let form = spec
            .build(&gamma, &Extra::Machine(library::copy(Kind::Polytime)))
            .unwrap();
        if let Some(a) = ev.mod_eq_upto(&form.formula, &gamma, tau, 3).unwrap() {
            return Err(format!("{kind} correct pair differs from gamma on\n{a}"));
        }
        forms += 1;
    }
    let spec8 = FormSpec::new(FormKind::NpConp8, Class::NpConp, &unord_tau, None).unwrap();
    let gamma = p("Ex E(x,x)");
    let form = spec8
        .build(&gamma, &Extra::Lambda(p("Ax ~E(x,x)")))
        .unwrap();
    if let Some(a) = ev
        .mod_eq_upto(&form.formula, &gamma, &unord_tau, 3)
        .unwrap()
    {
        return Err(format!("npconp8 correct pair differs from gamma on\n{a}"));
    }
    forms += 1;

    // broken pairs: the always-reject machine, with the first violation at
    // size 2 or 3
    let gamma = p("Ax E(x,x)");
    let reject = library::always_reject(Kind::Polytime);
    let ord_all: Vec<Structure> = (2..=4).flat_map(|n| all_structures(&ord_tau, n)).collect();
    let unord_all: Vec<Structure> = (2..=4)
        .flat_map(|n| all_structures(&unord_tau, n))
        .collect();
    let mut above = 0usize;
    let mut below = 0usize;
    for kind in [
        FormKind::Ord2,
        FormKind::Ord5,
        FormKind::Unord4,
        FormKind::Unord6,
    ] {
        let (tau, all, ups) = if kind.ordered() == Some(true) {
            (
                &ord_tau,
                &ord_all,
                ["Ex R(x)", "Ex Ey Ez (x < y & (y < z & R(x)))"],
            )
        } else {
            (
                &unord_tau,
                &unord_all,
                [
                    "Ex Ey R(x,y)",
                    "Ex Ey Ez ((x != y & (y != z & x != z)) & R(x,y))",
                ],
            )
        };
        for u in ups {
            let spec = FormSpec::new(kind, Class::Np, tau, Some(&p(u))).unwrap();
            let ut = spec.upsilon_tau().unwrap().clone();
            let s = least_violation(&reject, &gamma, &ut, tau);
            let form = spec.build(&gamma, &Extra::Machine(reject.clone())).unwrap();
            let cf = Compiled::sentence(&form.formula, tau).unwrap();
            let cu = Compiled::sentence(&ut, tau).unwrap();
            let cg = Compiled::sentence(&gamma, tau).unwrap();
            for a in all {
                let bound = ell_k(a.encode_bin().len() as u64, depth_of(kind));
                let got = cf.eval(a, &ev, 8).unwrap();
                let want = if bound as usize >= s {
                    above += 1;
                    cu.eval(a, &ev, 8).unwrap()
                } else {
                    below += 1;
                    cg.eval(a, &ev, 8).unwrap()
                };
                ensure!(got == want, "{kind} with {u} (violation at {s}) on\n{a}");
            }
            forms += 1;
        }
    }
    // form 8 with (Λ, Γ) complementary on size 2 only, and not at all
    let cg8 = Compiled::sentence(&p("Ex E(x,x)"), &unord_tau).unwrap();
    for lambda in [
        "(Ax ~E(x,x) & ~(Ex Ey Ez (x != y & (y != z & x != z))))",
        "Ex E(x,x)",
    ] {
        let lambda = p(lambda);
        let s = (2..=4)
            .find(|&n| {
                all_structures(&unord_tau, n)
                    .iter()
                    .any(|b| naive_models(b, &lambda) == naive_models(b, &p("Ex E(x,x)")))
            })
            .unwrap();
        let form = spec8
            .build(&p("Ex E(x,x)"), &Extra::Lambda(lambda))
            .unwrap();
        let cf = Compiled::sentence(&form.formula, &unord_tau).unwrap();
        for a in &unord_all {
            let bound = ell_k(a.encode_bin().len() as u64, 2) as usize;
            let got = cf.eval(a, &ev, 8).unwrap();
            if bound >= s {
                above += 1;
                ensure!(!got, "npconp8 broken pair satisfied above {s} by\n{a}");
            } else {
                below += 1;
                ensure!(
                    got == cg8.eval(a, &ev, 8).unwrap(),
                    "npconp8 below {s} on\n{a}"
                );
            }
        }
        forms += 1;
    }
    Ok(format!(
        "{forms} forms; {above} checks above the threshold, {below} below"
    ))
}

// ---------------------------------------------------------------------------
// 8. Recognition.

fn spec_for(kind: FormKind) -> (FormSpec, Vocabulary) {
    match kind {
        FormKind::Ord2 | FormKind::Ord5 => {
            let tau = v("E:2 <");
            (
                FormSpec::new(kind, Class::Np, &tau, Some(&p("Ex R(x)"))).unwrap(),
                tau,
            )
        }
        FormKind::Unord4 | FormKind::Unord6 => {
            let tau = v("E:2");
            (
                FormSpec::new(kind, Class::Np, &tau, Some(&p("Ex Ey R(x,y)"))).unwrap(),
                tau,
            )
        }
        FormKind::NpConp8 => {
            let tau = v("E:2");
            (FormSpec::new(kind, Class::NpConp, &tau, None).unwrap(), tau)
        }
    }
}

fn c8_recognition() -> Outcome {
    let start = Instant::now();
    let mut r = rng(8);
    let mut mutants = 0usize;
    for kind in FormKind::ALL {
        let (spec, tau) = spec_for(kind);
        let mut built = Vec::new();
        while built.len() < 50 {
            let so = r.gen_bool(0.3).then_some(true);
            let gamma = random_sentence(&mut r, &tau, 4, so);
            let extra = if kind == FormKind::NpConp8 {
                Extra::Lambda(random_sentence(&mut r, &tau, 4, so))
            } else {
                Extra::Machine(random_machine(&mut r, Kind::Polytime))
            };
            let form = spec
                .build(&gamma, &extra)
                .map_err(|e| format!("{kind}: {e} for {gamma}"))?;
            ensure!(
                spec.recognize(&form.formula).as_ref() == Some(&form.components),
                "{kind}: round trip failed for {gamma}"
            );
            built.push(form);
        }
        let mut pool: Vec<Formula> = built[..5]
            .iter()
            .flat_map(|f| mutations(&f.formula))
            .collect();
        pool.shuffle(&mut r);
        pool.truncate(300);
        ensure!(pool.len() >= 100, "{kind}: only {} mutants", pool.len());
        for m in &pool {
            ensure!(spec.recognize(m).is_none(), "{kind}: mutant accepted: {m}");
        }
        mutants += pool.len();

        let first: Vec<_> = spec.enumerate().take(20).collect();
        ensure!(
            first.len() == 20,
            "{kind}: enumeration ended after {}",
            first.len()
        );
        let distinct: HashSet<&Formula> = first.iter().map(|f| &f.formula).collect();
        ensure!(distinct.len() == 20, "{kind}: repeated enumerated form");
        for f in &first {
            ensure!(
                spec.recognize(&f.formula).as_ref() == Some(&f.components),
                "{kind}: enumerated form not recognized"
            );
        }
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(120), "took {t:?}");
    Ok(format!(
        "250 builds, {mutants} mutants rejected, 100 enumerated forms"
    ))
}

// ---------------------------------------------------------------------------
// 9. psi.

fn c9_psi() -> Outcome {
    ensure!(psi_encode(&Bits::new()).is_err(), "empty word accepted");
    let tau = v("E:2");
    let structures: Vec<Structure> = (2..=3).flat_map(|n| all_structures(&tau, n)).collect();
    let ev = Evaluator::new(8, 1);
    let mut words = 0;
    for len in 1..=10 {
        for x in 0u32..1 << len {
            let w: Bits = (0..len).map(|i| x >> (len - 1 - i) & 1 == 1).collect();
            let psi = psi_encode(&w).unwrap();
            ensure!(
                psi_recognize(&psi).as_ref() == Some(&w),
                "round trip of {w}"
            );
            let c = Compiled::sentence(&psi, &tau).unwrap();
            for a in &structures {
                ensure!(!c.eval(a, &ev, 8).unwrap(), "psi_{w} holds in\n{a}");
                if len <= 3 {
                    ensure!(!naive_models(a, &psi), "naive: psi_{w} holds in\n{a}");
                }
            }
            words += 1;
        }
    }
    Ok(format!("{words} words, 528 structures each"))
}

// ---------------------------------------------------------------------------
// 10. Grammars.

const GRAMMARS: [&str; 5] = [
    "S -> a S b | eps",
    "S -> 0 S | 1 S | eps",
    "S -> a S b S | eps",
    "S -> a S a | b S b | a | b | eps",
    "alphabet a p m l r\nE -> E p T | T\nT -> T m F | F\nF -> l E r | a\nU -> U a",
];

fn c10_cfg() -> Outcome {
    let mut words = 0;
    for text in GRAMMARS {
        let g: Grammar = text.parse().map_err(|e| format!("{e}"))?;
        let lang = derivable(&g, 6);
        let cnf = Cnf::new(&g);
        for w in words_upto(g.terminals(), 6) {
            let want = lang.contains(&w);
            ensure!(cnf.member(&w).unwrap() == want, "{text:?} on {w:?}");
            ensure!(cyk_member(&g, &w).unwrap() == want, "{text:?} on {w:?}");
            words += 1;
        }
    }

    // the set condition: every word up to the size bound is generated
    let mut verdicts = 0;
    let tau = v("E:2 <");
    let mut sample: Vec<Structure> = (2..=3).flat_map(|n| all_structures(&tau, n)).collect();
    let mut r = rng(10);
    for _ in 0..20 {
        let n = r.gen_range(4..=13);
        sample.push(random_structure(&mut r, &tau, n, 0.3));
    }
    for text in [
        "S -> 0 S | 1 S | eps",
        "S -> a S b | eps",
        "S -> eps | X | X X | X X X X T\nT -> X T | eps\nX -> a | b",
    ] {
        let g: Grammar = text.parse().unwrap();
        let lang = derivable(&g, 4);
        for a in &sample {
            let bound = ell_k(a.encode_bin().len() as u64, 3) as usize;
            let want = words_upto(g.terminals(), bound)
                .iter()
                .all(|w| lang.contains(w));
            ensure!(member_s_cfg(a, &g) == want, "{text:?} with bound {bound}");
            verdicts += 1;
        }
    }
    Ok(format!(
        "{words} words over 5 grammars, {verdicts} set verdicts"
    ))
}
