//! Machine codes: the kind, exponents, state count, start state and the
//! transition count, then each transition as eight integers in strictly
//! increasing key order.

use std::collections::BTreeMap;

use super::{Action, Kind, Machine, MachineError, Move, Sym};
use crate::bits::{BitReader, Bits};
use crate::natcode::{read_nat, write_nat};

pub fn encode_tm(t: &Machine) -> Bits {
    let mut out = Bits::new();
    write_nat(&mut out, matches!(t.kind, Kind::Logspace) as u64);
    write_nat(&mut out, t.clock_c as u64);
    write_nat(&mut out, t.step_c as u64);
    write_nat(&mut out, t.num_states as u64);
    write_nat(&mut out, t.start as u64);
    write_nat(&mut out, t.transitions.len() as u64);
    for (&(state, input, storage), a) in &t.transitions {
        for v in [
            state as u64,
            input.index(),
            storage.index(),
            a.next as u64,
            a.write.index(),
            a.input_move.index(),
            a.storage_move.index(),
            a.oracle.map_or(2, |b| b as u64),
        ] {
            write_nat(&mut out, v);
        }
    }
    out
}

pub fn decode_tm(bits: &Bits) -> Result<Machine, MachineError> {
    use MachineError::Malformed;
    let mut r = BitReader::new(bits);
    let mut nat = || read_nat(&mut r).map_err(|_| Malformed("bad integer"));
    let kind = match nat()? {
        0 => Kind::Polytime,
        1 => Kind::Logspace,
        _ => return Err(Malformed("unknown kind")),
    };
    let small = |v: u64| u32::try_from(v).map_err(|_| Malformed("exponent too large"));
    let clock_c = small(nat()?)?;
    let step_c = small(nat()?)?;
    let num_states = usize::try_from(nat()?).map_err(|_| Malformed("too many states"))?;
    let start = nat()? as usize;
    let count = nat()?;
    // each transition takes at least 32 bits
    if count > bits.len() as u64 / 32 {
        return Err(Malformed("transition count exceeds code length"));
    }
    let mut transitions = BTreeMap::new();
    let mut last = None;
    for _ in 0..count {
        let state = nat()? as usize;
        let input = Sym::from_index(nat()?).ok_or(Malformed("bad symbol"))?;
        let storage = Sym::from_index(nat()?).ok_or(Malformed("bad symbol"))?;
        let next = nat()? as usize;
        let write = Sym::from_index(nat()?).ok_or(Malformed("bad symbol"))?;
        let input_move = Move::from_index(nat()?).ok_or(Malformed("bad move"))?;
        let storage_move = Move::from_index(nat()?).ok_or(Malformed("bad move"))?;
        let oracle = match nat()? {
            0 => Some(false),
            1 => Some(true),
            2 => None,
            _ => return Err(Malformed("bad oracle symbol")),
        };
        let key = (state, input, storage);
        if last.is_some_and(|l| l >= key) {
            return Err(Malformed("transitions not in strictly increasing order"));
        }
        last = Some(key);
        transitions.insert(
            key,
            Action {
                next,
                write,
                input_move,
                storage_move,
                oracle,
            },
        );
    }
    if !r.is_at_end() {
        return Err(Malformed("trailing bits"));
    }
    Machine::new(kind, clock_c, step_c, num_states, start, transitions)
}
