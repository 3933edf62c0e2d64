//! Text format:
//!
//! ```text
//! kind polytime
//! clockC 2
//! stepC 2
//! states 5
//! start q4
//! q4 0 _ -> q4 _ R S 0
//! q4 _ _ -> QUE _ S S -
//! ```
//!
//! Each transition reads `state input storage -> next write inputMove
//! storageMove oracle`, with `_` for blank and `-` for no oracle output.
//! `states` defaults to one more than the largest state mentioned.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{state_name, Action, Kind, Machine, MachineError, Move, Sym, ACC, NO, QUE, YES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TextError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Invalid(#[from] MachineError),
}

fn parse_state(s: &str) -> Option<usize> {
    match s {
        "ACC" => Some(ACC),
        "QUE" => Some(QUE),
        "YES" => Some(YES),
        "NO" => Some(NO),
        _ => s.strip_prefix('q')?.parse().ok().filter(|&q| q >= 4),
    }
}

fn parse_sym(s: &str) -> Option<Sym> {
    match s {
        "0" => Some(Sym::Zero),
        "1" => Some(Sym::One),
        "_" => Some(Sym::Blank),
        _ => None,
    }
}

fn parse_move(s: &str) -> Option<Move> {
    match s {
        "L" => Some(Move::Left),
        "R" => Some(Move::Right),
        "S" => Some(Move::Stay),
        _ => None,
    }
}

fn sym_str(s: Sym) -> &'static str {
    match s {
        Sym::Zero => "0",
        Sym::One => "1",
        Sym::Blank => "_",
    }
}

fn move_str(m: Move) -> &'static str {
    match m {
        Move::Left => "L",
        Move::Right => "R",
        Move::Stay => "S",
    }
}

impl FromStr for Machine {
    type Err = TextError;

    fn from_str(text: &str) -> Result<Self, TextError> {
        let mut kind = None;
        let mut clock_c = None;
        let mut step_c = None;
        let mut states = None;
        let mut start = None;
        let mut transitions = BTreeMap::new();
        let mut max_state = 4;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: &str| TextError::Syntax {
                line,
                msg: msg.to_string(),
            };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let words: Vec<&str> = content.split_whitespace().collect();
            let number = || -> Result<u64, TextError> {
                match words.as_slice() {
                    [_, v] => v.parse().map_err(|_| err("expected a number")),
                    _ => Err(err("expected one value")),
                }
            };
            match words[0] {
                "kind" => {
                    kind = Some(match words.get(1..) {
                        Some(["polytime"]) => Kind::Polytime,
                        Some(["logspace"]) => Kind::Logspace,
                        _ => return Err(err("kind is polytime or logspace")),
                    })
                }
                "clockC" => clock_c = Some(u32::try_from(number()?).map_err(|_| err("too large"))?),
                "stepC" => step_c = Some(u32::try_from(number()?).map_err(|_| err("too large"))?),
                "states" => {
                    states = Some(usize::try_from(number()?).map_err(|_| err("too large"))?)
                }
                "start" => {
                    let [_, s] = words.as_slice() else {
                        return Err(err("expected one state"));
                    };
                    let s = parse_state(s).ok_or_else(|| err("bad state"))?;
                    max_state = max_state.max(s);
                    start = Some(s);
                }
                _ => {
                    let [st, inp, sto, "->", next, write, im, sm, or] = words.as_slice() else {
                        return Err(err(
                            "expected `state in storage -> next write move move oracle`",
                        ));
                    };
                    let state = parse_state(st).ok_or_else(|| err("bad state"))?;
                    let next = parse_state(next).ok_or_else(|| err("bad state"))?;
                    max_state = max_state.max(state).max(next);
                    let sym = |s| parse_sym(s).ok_or_else(|| err("bad symbol"));
                    let mv = |s| parse_move(s).ok_or_else(|| err("bad move"));
                    let oracle = match *or {
                        "0" => Some(false),
                        "1" => Some(true),
                        "-" => None,
                        _ => return Err(err("oracle output is 0, 1 or -")),
                    };
                    let key = (state, sym(inp)?, sym(sto)?);
                    let action = Action {
                        next,
                        write: sym(write)?,
                        input_move: mv(im)?,
                        storage_move: mv(sm)?,
                        oracle,
                    };
                    if transitions.insert(key, action).is_some() {
                        return Err(err("duplicate transition"));
                    }
                }
            }
        }
        let missing = |what: &str| TextError::Syntax {
            line: 0,
            msg: format!("missing `{what}`"),
        };
        Ok(Machine::new(
            kind.ok_or_else(|| missing("kind"))?,
            clock_c.ok_or_else(|| missing("clockC"))?,
            step_c.ok_or_else(|| missing("stepC"))?,
            states.unwrap_or(max_state + 1),
            start.ok_or_else(|| missing("start"))?,
            transitions,
        )?)
    }
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kind {}", self.kind())?;
        writeln!(f, "clockC {}", self.clock_c())?;
        writeln!(f, "stepC {}", self.step_c())?;
        writeln!(f, "states {}", self.num_states())?;
        writeln!(f, "start {}", state_name(self.start()))?;
        for (&(s, i, st), a) in self.transitions() {
            writeln!(
                f,
                "{} {} {} -> {} {} {} {} {}",
                state_name(s),
                sym_str(i),
                sym_str(st),
                state_name(a.next),
                sym_str(a.write),
                move_str(a.input_move),
                move_str(a.storage_move),
                a.oracle.map_or("-", |b| if b { "1" } else { "0" }),
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::library;

    #[test]
    fn round_trip() {
        for t in library::all() {
            assert_eq!(t.to_string().parse::<Machine>().unwrap(), t);
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            "kind polytime\nclockC 1\nstepC 1\nstart q4\nq4 0 _ -> q4 _ X S -".parse::<Machine>(),
            Err(TextError::Syntax { line: 5, .. })
        ));
        assert!(matches!(
            "kind polytime\nclockC 1\nstepC 1\nstart q4\nACC 0 _ -> q4 _ R S -".parse::<Machine>(),
            Err(TextError::Invalid(MachineError::ReservedTransition))
        ));
    }
}
