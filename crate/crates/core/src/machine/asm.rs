//! Textual assembler: one mnemonic per line.
//!
//! ```text
//! ; parity of the input
//! READ r0
//! JEOF +4
//! JZ r0 -2
//! ...
//! ```
//!
//! Registers are `r0`/`r1`; offsets are signed decimals in `-8..=7` (a leading
//! `+` is optional). Literals are written as bits (`QUOTE 0110`,
//! `MATCH AU 01`) and may be omitted when empty. `;` and `#` start comments. Disassembly prints the same
//! syntax, so `assemble(disassemble(p)) == p` bit for bit.

use thiserror::Error;

use super::isa::{
    decode, encode, Instruction, Malformed, MatchMode, Program, Reg, OFFSET_MAX, OFFSET_MIN,
};
use crate::bits::BitString;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsmError {
    #[error("line {line}: unknown mnemonic {mnemonic:?}")]
    UnknownMnemonic { line: usize, mnemonic: String },
    #[error("line {line}: expected {expected} operand(s), found {found}")]
    OperandCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: bad register {text:?}")]
    BadRegister { line: usize, text: String },
    #[error("line {line}: bad offset {text:?} (range {OFFSET_MIN}..={OFFSET_MAX})")]
    BadOffset { line: usize, text: String },
    #[error("line {line}: bad operand {text:?}")]
    BadOperand { line: usize, text: String },
    #[error("line {line}: nothing may follow QUOTE or MATCH")]
    AfterTail { line: usize },
    #[error("cannot disassemble: {0}")]
    Malformed(Malformed),
}

pub fn assemble(source: &str) -> Result<Program, AsmError> {
    let mut instrs = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split([';', '#']).next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let mut parts = text.split_whitespace();
        let mnemonic = parts.next().expect("non-empty line").to_ascii_uppercase();
        let ops: Vec<&str> = parts.collect();
        let want = |n: usize| {
            if ops.len() == n {
                Ok(())
            } else {
                Err(AsmError::OperandCount {
                    line,
                    expected: n,
                    found: ops.len(),
                })
            }
        };
        let reg = |s: &str| {
            s.strip_prefix(['r', 'R'])
                .and_then(|d| d.parse::<u8>().ok())
                .and_then(Reg::new)
                .ok_or_else(|| AsmError::BadRegister {
                    line,
                    text: s.to_string(),
                })
        };
        let off = |s: &str| {
            s.trim_start_matches('+')
                .parse::<i8>()
                .ok()
                .filter(|d| (OFFSET_MIN..=OFFSET_MAX).contains(d))
                .ok_or_else(|| AsmError::BadOffset {
                    line,
                    text: s.to_string(),
                })
        };
        let lit = |s: &str| {
            s.parse::<BitString>().map_err(|_| AsmError::BadOperand {
                line,
                text: s.to_string(),
            })
        };
        if let Some(last) = instrs.last() {
            if Instruction::takes_tail(last) {
                return Err(AsmError::AfterTail { line });
            }
        }
        let instr = match mnemonic.as_str() {
            "HALT" => want(0).map(|_| Instruction::Halt)?,
            "ACCEPT" => want(0).map(|_| Instruction::Accept)?,
            "REJECT" => want(0).map(|_| Instruction::Reject)?,
            "UNKNOWN" => want(0).map(|_| Instruction::Unknown)?,
            "EMIT0" => want(0).map(|_| Instruction::Emit0)?,
            "EMIT1" => want(0).map(|_| Instruction::Emit1)?,
            "QUOTE" => {
                if ops.len() > 1 {
                    want(1)?;
                }
                Instruction::Quote(lit(ops.first().copied().unwrap_or(""))?)
            }
            "MATCH" => {
                if ops.len() != 2 {
                    want(1)?;
                }
                let m = MatchMode::ALL
                    .into_iter()
                    .find(|m| m.mnemonic().eq_ignore_ascii_case(ops[0]))
                    .ok_or_else(|| AsmError::BadOperand {
                        line,
                        text: ops[0].to_string(),
                    })?;
                Instruction::Match(m, lit(ops.get(1).copied().unwrap_or(""))?)
            }
            "READ" => {
                want(1)?;
                Instruction::Read(reg(ops[0])?)
            }
            "INC" => {
                want(1)?;
                Instruction::Inc(reg(ops[0])?)
            }
            "DEC" => {
                want(1)?;
                Instruction::Dec(reg(ops[0])?)
            }
            "JZ" => {
                want(2)?;
                Instruction::Jz(reg(ops[0])?, off(ops[1])?)
            }
            "JMP" => {
                want(1)?;
                Instruction::Jmp(off(ops[0])?)
            }
            "JEOF" => {
                want(1)?;
                Instruction::Jeof(off(ops[0])?)
            }
            "CPY" => {
                want(2)?;
                Instruction::Cpy(reg(ops[0])?, reg(ops[1])?)
            }
            other => {
                return Err(AsmError::UnknownMnemonic {
                    line,
                    mnemonic: other.to_string(),
                })
            }
        };
        instrs.push(instr);
    }
    Ok(Program::new(encode(&instrs)))
}

pub fn disassemble(program: &Program) -> Result<String, AsmError> {
    let instrs = decode(program.bits().as_slice()).map_err(AsmError::Malformed)?;
    Ok(instrs.iter().map(|i| format!("{i}\n")).collect())
}

/// Odd-parity acceptor: a two-state loop over the input, 9 instructions.
pub const PARITY_SRC: &str = "
    ; even state
    READ r0
    JEOF +6      ; end of input in even state
    JZ r0 -2
    ; odd state
    READ r0
    JEOF +4
    JZ r0 -2
    JMP -6
    REJECT
    ACCEPT
";
