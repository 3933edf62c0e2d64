//! Deterministic oracle Turing machines with a two-way read-only input tape,
//! a read-write storage tape, and an append-only oracle tape.

mod code;
pub mod library;
mod sim;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use code::{decode_tm, encode_tm};
pub use sim::{is_reduction_upto, run, run_with_oracle, Halt, RunLimits, RunOutcome};
pub use text::TextError;

pub const ACC: usize = 0;
pub const QUE: usize = 1;
pub const YES: usize = 2;
pub const NO: usize = 3;

/// Number of reserved states; ordinary states are numbered from here.
pub const RESERVED_STATES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// Step limit `(n+2)^clockC`.
    Polytime,
    /// Storage limit `⌊clockC·log₂(n+2)⌋` cells.
    Logspace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    Zero,
    One,
    Blank,
}

impl Sym {
    pub fn index(self) -> u64 {
        self as u64
    }

    pub fn from_index(i: u64) -> Option<Sym> {
        [Sym::Zero, Sym::One, Sym::Blank].get(i as usize).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Left,
    Right,
    Stay,
}

impl Move {
    pub fn index(self) -> u64 {
        self as u64
    }

    pub fn from_index(i: u64) -> Option<Move> {
        [Move::Left, Move::Right, Move::Stay]
            .get(i as usize)
            .copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action {
    pub next: usize,
    pub write: Sym,
    pub input_move: Move,
    pub storage_move: Move,
    /// Bit appended to the oracle tape, if any.
    pub oracle: Option<bool>,
}

/// Transition key: current state, input symbol, storage symbol.
pub type Key = (usize, Sym, Sym);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Machine {
    kind: Kind,
    clock_c: u32,
    step_c: u32,
    num_states: usize,
    start: usize,
    transitions: BTreeMap<Key, Action>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("a machine needs at least the {RESERVED_STATES} reserved states")]
    TooFewStates,
    #[error("state {0} is out of range")]
    StateOutOfRange(usize),
    #[error("the accepting and query states take no ordinary transitions")]
    ReservedTransition,
    #[error("clock and step exponents must be positive")]
    ZeroExponent,
    #[error("malformed machine code: {0}")]
    Malformed(&'static str),
}

impl Machine {
    pub fn new(
        kind: Kind,
        clock_c: u32,
        step_c: u32,
        num_states: usize,
        start: usize,
        transitions: BTreeMap<Key, Action>,
    ) -> Result<Self, MachineError> {
        if num_states < RESERVED_STATES {
            return Err(MachineError::TooFewStates);
        }
        if clock_c == 0 || step_c == 0 {
            return Err(MachineError::ZeroExponent);
        }
        if start >= num_states {
            return Err(MachineError::StateOutOfRange(start));
        }
        for (&(state, _, _), action) in &transitions {
            if state >= num_states {
                return Err(MachineError::StateOutOfRange(state));
            }
            if action.next >= num_states {
                return Err(MachineError::StateOutOfRange(action.next));
            }
            if state == ACC || state == QUE {
                return Err(MachineError::ReservedTransition);
            }
        }
        Ok(Machine {
            kind,
            clock_c,
            step_c,
            num_states,
            start,
            transitions,
        })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn clock_c(&self) -> u32 {
        self.clock_c
    }

    pub fn step_c(&self) -> u32 {
        self.step_c
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn transitions(&self) -> &BTreeMap<Key, Action> {
        &self.transitions
    }

    pub fn action(&self, key: Key) -> Option<&Action> {
        self.transitions.get(&key)
    }
}

pub fn state_name(s: usize) -> String {
    match s {
        ACC => "ACC".into(),
        QUE => "QUE".into(),
        YES => "YES".into(),
        NO => "NO".into(),
        q => format!("q{q}"),
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Polytime => "polytime",
            Kind::Logspace => "logspace",
        })
    }
}
