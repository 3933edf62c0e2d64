use super::{Kind, Machine, Move, Sym, ACC, NO, QUE, YES};
use crate::bits::Bits;
use crate::eval::{self, Compiled, EvalError};
use crate::logic::Formula;
use crate::structure::{enumerate_structures, Structure};
use crate::vocab::Vocabulary;

/// Extra caps on top of the limits a machine's own exponents impose.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunLimits {
    pub max_steps: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Halt {
    Accepted,
    /// No transition applies in the current configuration.
    Stuck,
    StepLimit,
    SpaceLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOutcome {
    pub halt: Halt,
    pub steps: u64,
    pub queries: u64,
}

impl RunOutcome {
    pub fn accepted(&self) -> bool {
        self.halt == Halt::Accepted
    }
}

fn pow_sat(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp).unwrap_or(u64::MAX)
}

impl Machine {
    pub fn step_limit(&self, input_len: usize, limits: RunLimits) -> u64 {
        let base = input_len as u64 + 2;
        let mut cap = pow_sat(base, self.step_c());
        if self.kind() == Kind::Polytime {
            cap = cap.min(pow_sat(base, self.clock_c()));
        }
        limits.max_steps.map_or(cap, |m| cap.min(m))
    }

    /// Storage cells available to a logspace machine.
    pub fn space_limit(&self, input_len: usize) -> Option<usize> {
        match self.kind() {
            Kind::Polytime => None,
            Kind::Logspace => {
                let log = (input_len as f64 + 2.0).log2();
                Some((self.clock_c() as f64 * log).floor() as usize)
            }
        }
    }
}

/// Runs `t` on `input`, answering each query with `oracle` applied to the
/// oracle tape contents.
pub fn run_with_oracle(
    t: &Machine,
    input: &Bits,
    oracle: &mut dyn FnMut(&Bits) -> Result<bool, EvalError>,
    limits: RunLimits,
) -> Result<RunOutcome, EvalError> {
    let max_steps = t.step_limit(input.len(), limits);
    let space = t.space_limit(input.len());
    let read_input = |pos: i64| -> Sym {
        match usize::try_from(pos).ok().and_then(|p| input.get(p)) {
            Some(false) => Sym::Zero,
            Some(true) => Sym::One,
            None => Sym::Blank,
        }
    };
    let mut state = t.start();
    let mut in_pos: i64 = 0;
    let mut storage: Vec<Sym> = Vec::new();
    let mut st_pos = 0usize;
    let mut tape = Bits::new();
    let mut steps = 0u64;
    let mut queries = 0u64;
    let outcome = |halt, steps, queries| RunOutcome {
        halt,
        steps,
        queries,
    };
    loop {
        if state == ACC {
            return Ok(outcome(Halt::Accepted, steps, queries));
        }
        if space.is_some_and(|cap| st_pos >= cap) {
            return Ok(outcome(Halt::SpaceLimit, steps, queries));
        }
        if steps >= max_steps {
            return Ok(outcome(Halt::StepLimit, steps, queries));
        }
        if state == QUE {
            let yes = oracle(&tape)?;
            tape = Bits::new();
            debug_assert!(tape.is_empty());
            queries += 1;
            steps += 1;
            state = if yes { YES } else { NO };
            continue;
        }
        let st_sym = storage.get(st_pos).copied().unwrap_or(Sym::Blank);
        let Some(a) = t.action((state, read_input(in_pos), st_sym)) else {
            return Ok(outcome(Halt::Stuck, steps, queries));
        };
        steps += 1;
        if st_pos >= storage.len() {
            storage.resize(st_pos + 1, Sym::Blank);
        }
        storage[st_pos] = a.write;
        if let Some(b) = a.oracle {
            tape.push(b);
        }
        match a.input_move {
            Move::Left => in_pos -= 1,
            Move::Right => in_pos += 1,
            Move::Stay => {}
        }
        match a.storage_move {
            Move::Left => st_pos = st_pos.saturating_sub(1),
            Move::Right => st_pos += 1,
            Move::Stay => {}
        }
        state = a.next;
    }
}

/// Oracle answering "is the query the encoding of a model of `gamma`".
pub fn model_oracle<'a>(
    gamma: &'a Compiled,
    ev: &'a eval::Evaluator,
) -> impl FnMut(&Bits) -> Result<bool, EvalError> + 'a {
    move |q: &Bits| match Structure::decode_bin(gamma.vocab().clone(), q) {
        Ok(b) => gamma.eval(&b, ev, ev.budget()),
        Err(_) => Ok(false),
    }
}

/// Runs `t` with an oracle for the models of `gamma` over `vocab`.
pub fn run(
    t: &Machine,
    input: &Bits,
    gamma: &Formula,
    vocab: &Vocabulary,
    limits: RunLimits,
) -> Result<RunOutcome, EvalError> {
    let compiled = Compiled::sentence(gamma, vocab)?;
    let mut oracle = model_oracle(&compiled, eval::shared());
    run_with_oracle(t, input, &mut oracle, limits)
}

/// Least `B` with `n <= n_max` on which acceptance by `t` (with oracle
/// `gamma`) differs from `B ⊨ target`.
pub fn is_reduction_upto(
    t: &Machine,
    gamma: &Formula,
    target: &Formula,
    vocab: &Vocabulary,
    n_max: usize,
) -> Result<Option<Structure>, EvalError> {
    let ev = eval::shared();
    let g = Compiled::sentence(gamma, vocab)?;
    let tgt = Compiled::sentence(target, vocab)?;
    let mut oracle = model_oracle(&g, ev);
    for b in enumerate_structures(vocab, n_max) {
        let accepted =
            run_with_oracle(t, &b.encode_bin(), &mut oracle, RunLimits::default())?.accepted();
        if accepted != tgt.eval(&b, ev, ev.budget())? {
            return Ok(Some(b));
        }
    }
    Ok(None)
}
