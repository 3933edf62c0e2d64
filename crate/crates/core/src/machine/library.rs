//! A few fixed machines used as reductions and counterexamples.

use std::collections::BTreeMap;

use super::{Action, Kind, Machine, Move, Sym, ACC, QUE, RESERVED_STATES, YES};

const Q: usize = RESERVED_STATES;

fn exponents(kind: Kind) -> (u32, u32) {
    match kind {
        Kind::Polytime => (2, 2),
        Kind::Logspace => (1, 2),
    }
}

/// Copies the input to the oracle tape, asks the oracle, and accepts exactly
/// when the answer is yes. Runs in `|input| + 3` steps.
pub fn copy(kind: Kind) -> Machine {
    let mut t = BTreeMap::new();
    let step = |next, oracle| Action {
        next,
        write: Sym::Blank,
        input_move: Move::Right,
        storage_move: Move::Stay,
        oracle,
    };
    t.insert((Q, Sym::Zero, Sym::Blank), step(Q, Some(false)));
    t.insert((Q, Sym::One, Sym::Blank), step(Q, Some(true)));
    t.insert(
        (Q, Sym::Blank, Sym::Blank),
        Action {
            input_move: Move::Stay,
            ..step(QUE, None)
        },
    );
    t.insert(
        (YES, Sym::Blank, Sym::Blank),
        Action {
            input_move: Move::Stay,
            ..step(ACC, None)
        },
    );
    let (c, s) = exponents(kind);
    Machine::new(kind, c, s, Q + 1, Q, t).expect("valid")
}

/// Halts at once in a non-accepting state.
pub fn always_reject(kind: Kind) -> Machine {
    let (c, s) = exponents(kind);
    Machine::new(kind, c, s, Q + 1, Q, BTreeMap::new()).expect("valid")
}

/// Starts in the accepting state.
pub fn always_accept(kind: Kind) -> Machine {
    let (c, s) = exponents(kind);
    Machine::new(kind, c, s, RESERVED_STATES, ACC, BTreeMap::new()).expect("valid")
}

/// Moves right on the input forever; only the step limit stops it.
pub fn right_walk(kind: Kind) -> Machine {
    let mut t = BTreeMap::new();
    for s in [Sym::Zero, Sym::One, Sym::Blank] {
        t.insert(
            (Q, s, Sym::Blank),
            Action {
                next: Q,
                write: Sym::Blank,
                input_move: Move::Right,
                storage_move: Move::Stay,
                oracle: None,
            },
        );
    }
    let (c, s) = exponents(kind);
    Machine::new(kind, c, s, Q + 1, Q, t).expect("valid")
}

pub fn by_name(name: &str, kind: Kind) -> Option<Machine> {
    Some(match name {
        "copy" => copy(kind),
        "always-reject" => always_reject(kind),
        "always-accept" => always_accept(kind),
        "right-walk" => right_walk(kind),
        _ => return None,
    })
}

pub fn all() -> Vec<Machine> {
    [Kind::Polytime, Kind::Logspace]
        .into_iter()
        .flat_map(|k| [copy(k), always_reject(k), always_accept(k), right_walk(k)])
        .collect()
}
