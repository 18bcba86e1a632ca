//! Step-counted interpreter.
//!
//! Every executed instruction costs exactly one step, halting ones included.
//! Falling off the end of the program (or jumping outside it) halts without
//! cost. In generator mode a halt yields the output tape; in acceptor mode
//! only `ACCEPT`/`REJECT`/`UNKNOWN` give a definite verdict and any other
//! halt is ⊥.

use serde::{Deserialize, Serialize};

use super::isa::{Instruction, Malformed, Program, REGISTER_COUNT};
use crate::bits::BitString;
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExecutionBudget {
    pub max_steps: u64,
}

impl ExecutionBudget {
    pub const fn new(max_steps: u64) -> Self {
        Self { max_steps }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutcomeKind {
    HaltedOutput(BitString),
    HaltedVerdict(Verdict),
    OutOfTime,
    Malformed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub kind: OutcomeKind,
    pub steps_used: u64,
}

impl RunOutcome {
    /// The acceptor verdict, with `OutOfTime` and `Malformed` read as ⊥.
    pub fn verdict(&self) -> Verdict {
        match self.kind {
            OutcomeKind::HaltedVerdict(v) => v,
            _ => Verdict::Unknown,
        }
    }

    pub fn output(&self) -> Option<&BitString> {
        match &self.kind {
            OutcomeKind::HaltedOutput(x) => Some(x),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Generator,
    Acceptor,
}

/// A program decoded once and runnable many times.
#[derive(Debug, Clone)]
pub struct Decoded {
    instrs: Vec<Instruction>,
}

enum Stop {
    FellOff,
    Halt,
    Verdict(Verdict),
    OutOfTime,
}

impl Decoded {
    pub fn new(program: &Program) -> Result<Self, Malformed> {
        program.decode().map(|instrs| Self { instrs })
    }

    pub fn from_instructions(instrs: Vec<Instruction>) -> Self {
        Self { instrs }
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instrs
    }

    pub fn run_generator(&self, budget: ExecutionBudget) -> RunOutcome {
        let mut output = BitString::new();
        let (stop, steps) = self.execute(Mode::Generator, &BitString::new(), &mut output, budget);
        let kind = match stop {
            Stop::OutOfTime => OutcomeKind::OutOfTime,
            _ => OutcomeKind::HaltedOutput(output),
        };
        RunOutcome {
            kind,
            steps_used: steps,
        }
    }

    pub fn run_acceptor(&self, input: &BitString, budget: ExecutionBudget) -> RunOutcome {
        let mut sink = BitString::new();
        let (stop, steps) = self.execute(Mode::Acceptor, input, &mut sink, budget);
        let kind = match stop {
            Stop::OutOfTime => OutcomeKind::OutOfTime,
            Stop::Verdict(v) => OutcomeKind::HaltedVerdict(v),
            Stop::Halt | Stop::FellOff => OutcomeKind::HaltedVerdict(Verdict::Unknown),
        };
        RunOutcome {
            kind,
            steps_used: steps,
        }
    }

    fn execute(
        &self,
        mode: Mode,
        input: &BitString,
        output: &mut BitString,
        budget: ExecutionBudget,
    ) -> (Stop, u64) {
        let len = self.instrs.len() as i64;
        let mut regs = [0u32; REGISTER_COUNT];
        let mut head = 0usize;
        let mut eof = false;
        let mut pc: i64 = 0;
        let mut steps = 0u64;
        let input = input.as_slice();

        while (0..len).contains(&pc) {
            if steps == budget.max_steps {
                return (Stop::OutOfTime, steps);
            }
            steps += 1;
            let mut next = pc + 1;
            match &self.instrs[pc as usize] {
                Instruction::Halt => return (Stop::Halt, steps),
                Instruction::Accept if mode == Mode::Acceptor => {
                    return (Stop::Verdict(Verdict::Accept), steps)
                }
                Instruction::Reject if mode == Mode::Acceptor => {
                    return (Stop::Verdict(Verdict::Reject), steps)
                }
                Instruction::Unknown if mode == Mode::Acceptor => {
                    return (Stop::Verdict(Verdict::Unknown), steps)
                }
                Instruction::Accept | Instruction::Reject | Instruction::Unknown => {
                    return (Stop::Halt, steps)
                }
                Instruction::Quote(lit) => {
                    if mode == Mode::Generator {
                        output.extend_from(lit);
                    }
                    return (Stop::Halt, steps);
                }
                Instruction::Match(m, lit) => {
                    if mode == Mode::Generator {
                        return (Stop::Halt, steps);
                    }
                    let (hit, miss) = m.verdicts();
                    let next_bits = input.get(head..head + lit.len());
                    let v = if next_bits == Some(lit.as_slice()) {
                        hit
                    } else {
                        miss
                    };
                    return (Stop::Verdict(v), steps);
                }
                Instruction::Emit0 => {
                    if mode == Mode::Generator {
                        output.push(false);
                    }
                }
                Instruction::Emit1 => {
                    if mode == Mode::Generator {
                        output.push(true);
                    }
                }
                Instruction::Read(r) => {
                    regs[r.index()] = match input.get(head) {
                        Some(&b) => {
                            head += 1;
                            b as u32
                        }
                        None => {
                            eof = true;
                            0
                        }
                    };
                }
                Instruction::Inc(r) => regs[r.index()] = regs[r.index()].wrapping_add(1),
                Instruction::Dec(r) => regs[r.index()] = regs[r.index()].saturating_sub(1),
                Instruction::Cpy(d, s) => regs[d.index()] = regs[s.index()],
                Instruction::Jz(r, d) => {
                    if regs[r.index()] == 0 {
                        next = pc + *d as i64;
                    }
                }
                Instruction::Jmp(d) => next = pc + *d as i64,
                Instruction::Jeof(d) => {
                    if eof {
                        next = pc + *d as i64;
                    }
                }
            }
            pc = next;
        }
        (Stop::FellOff, steps)
    }
}

pub fn run_generator(program: &Program, budget: ExecutionBudget) -> RunOutcome {
    match Decoded::new(program) {
        Ok(d) => d.run_generator(budget),
        Err(_) => RunOutcome {
            kind: OutcomeKind::Malformed,
            steps_used: 0,
        },
    }
}

pub fn run_acceptor(program: &Program, input: &BitString, budget: ExecutionBudget) -> RunOutcome {
    match Decoded::new(program) {
        Ok(d) => d.run_acceptor(input, budget),
        Err(_) => RunOutcome {
            kind: OutcomeKind::Malformed,
            steps_used: 0,
        },
    }
}
