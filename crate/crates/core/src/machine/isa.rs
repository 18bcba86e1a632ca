//! Instruction set and bit-exact binary codec.
//!
//! Opcodes form a prefix-free code, so any bitstring either decodes to a
//! unique instruction list or is malformed. `QUOTE` and `MATCH` take the rest
//! of the program as a literal operand and therefore always come last.
//!
//! | opcode     | mnemonic     | operands                  | total bits |
//! |------------|--------------|---------------------------|-----------:|
//! | `00`       | `QUOTE`      | literal tail              | 2 + tail |
//! | `01`       | `MATCH m`    | m: 2 bits, literal tail   | 4 + tail |
//! | `100`      | `ACCEPT`     |                           | 3 |
//! | `101`      | `REJECT`     |                           | 3 |
//! | `1100`     | `UNKNOWN`    |                           | 4 |
//! | `1101`     | `HALT`       |                           | 4 |
//! | `11100`    | `READ r`     | r: 1 bit                  | 6 |
//! | `11101`    | `JZ r d`     | r: 1 bit, d: 4-bit signed | 10 |
//! | `111100`   | `JMP d`      | d: 4-bit signed           | 10 |
//! | `111101`   | `JEOF d`     | d: 4-bit signed           | 10 |
//! | `1111100`  | `EMIT0`      |                           | 7 |
//! | `1111101`  | `EMIT1`      |                           | 7 |
//! | `11111100` | `INC r`      | r: 1 bit                  | 9 |
//! | `11111101` | `DEC r`      | r: 1 bit                  | 9 |
//! | `11111110` | `CPY r s`    | r, s: 1 bit each          | 10 |
//! | `11111111` | undefined    |                           | - |
//!
//! `QUOTE` appends its literal to the output and halts. `MATCH` tests whether
//! the unread input starts with its literal and halts with the verdict
//! selected by `m`:
//!
//! | m    | on match | otherwise |
//! |------|----------|-----------|
//! | `00` | 1        | 0         |
//! | `01` | 0        | 1         |
//! | `10` | 1        | ⊥         |
//! | `11` | 0        | ⊥         |
//!
//! Jump offsets are two's complement in `-8..=7`, relative to the jumping
//! instruction's own index.

use std::fmt;

use crate::bits::BitString;
use crate::verdict::Verdict;

pub const REGISTER_COUNT: usize = 2;
pub const OFFSET_MIN: i8 = -8;
pub const OFFSET_MAX: i8 = 7;

const REG_BITS: usize = 1;
const OFFSET_BITS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Reg(pub u8);

impl Reg {
    pub fn new(index: u8) -> Option<Self> {
        ((index as usize) < REGISTER_COUNT).then_some(Reg(index))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Reg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

/// Verdict pair of a `MATCH`: (on match, otherwise).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatchMode {
    AcceptReject,
    RejectAccept,
    AcceptUnknown,
    RejectUnknown,
}

impl MatchMode {
    pub const ALL: [MatchMode; 4] = [
        MatchMode::AcceptReject,
        MatchMode::RejectAccept,
        MatchMode::AcceptUnknown,
        MatchMode::RejectUnknown,
    ];

    pub fn verdicts(self) -> (Verdict, Verdict) {
        match self {
            MatchMode::AcceptReject => (Verdict::Accept, Verdict::Reject),
            MatchMode::RejectAccept => (Verdict::Reject, Verdict::Accept),
            MatchMode::AcceptUnknown => (Verdict::Accept, Verdict::Unknown),
            MatchMode::RejectUnknown => (Verdict::Reject, Verdict::Unknown),
        }
    }

    fn code(self) -> u8 {
        self as u8
    }

    /// Assembler spelling: `AR`, `RA`, `AU`, `RU`.
    pub fn mnemonic(self) -> &'static str {
        match self {
            MatchMode::AcceptReject => "AR",
            MatchMode::RejectAccept => "RA",
            MatchMode::AcceptUnknown => "AU",
            MatchMode::RejectUnknown => "RU",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Instruction {
    Halt,
    Accept,
    Reject,
    Unknown,
    Emit0,
    Emit1,
    /// Appends the literal to the output and halts.
    Quote(BitString),
    /// Tests whether the unread input starts with the literal.
    Match(MatchMode, BitString),
    /// Next input bit into the register; past the end yields 0 and sets EOF.
    Read(Reg),
    Inc(Reg),
    /// Saturates at zero.
    Dec(Reg),
    Jz(Reg, i8),
    Jmp(i8),
    Jeof(i8),
    /// `Cpy(dst, src)`.
    Cpy(Reg, Reg),
}

impl Instruction {
    /// Encoded width in bits.
    pub fn width(&self) -> usize {
        match self {
            Instruction::Quote(lit) => 2 + lit.len(),
            Instruction::Match(_, lit) => 4 + lit.len(),
            Instruction::Accept | Instruction::Reject => 3,
            Instruction::Halt | Instruction::Unknown => 4,
            Instruction::Read(_) => 6,
            Instruction::Emit0 | Instruction::Emit1 => 7,
            Instruction::Inc(_) | Instruction::Dec(_) => 9,
            Instruction::Jz(..)
            | Instruction::Jmp(_)
            | Instruction::Jeof(_)
            | Instruction::Cpy(..) => 10,
        }
    }

    /// Whether the instruction consumes the rest of the program.
    pub fn takes_tail(&self) -> bool {
        matches!(self, Instruction::Quote(_) | Instruction::Match(..))
    }

    pub fn encode_into(&self, out: &mut BitString) {
        let push = |out: &mut BitString, code: &str| {
            for c in code.chars() {
                out.push(c == '1');
            }
        };
        let push_reg = |out: &mut BitString, r: Reg| {
            out.extend_from(&BitString::from_uint(r.0 as u64, REG_BITS));
        };
        let push_off = |out: &mut BitString, d: i8| {
            debug_assert!((OFFSET_MIN..=OFFSET_MAX).contains(&d));
            out.extend_from(&BitString::from_uint((d as u8 & 0x0f) as u64, OFFSET_BITS));
        };
        match self {
            Instruction::Quote(lit) => {
                push(out, "00");
                out.extend_from(lit);
            }
            Instruction::Match(m, lit) => {
                push(out, "01");
                out.extend_from(&BitString::from_uint(m.code() as u64, 2));
                out.extend_from(lit);
            }
            Instruction::Accept => push(out, "100"),
            Instruction::Reject => push(out, "101"),
            Instruction::Unknown => push(out, "1100"),
            Instruction::Halt => push(out, "1101"),
            Instruction::Read(r) => {
                push(out, "11100");
                push_reg(out, *r);
            }
            Instruction::Jz(r, d) => {
                push(out, "11101");
                push_reg(out, *r);
                push_off(out, *d);
            }
            Instruction::Jmp(d) => {
                push(out, "111100");
                push_off(out, *d);
            }
            Instruction::Jeof(d) => {
                push(out, "111101");
                push_off(out, *d);
            }
            Instruction::Emit0 => push(out, "1111100"),
            Instruction::Emit1 => push(out, "1111101"),
            Instruction::Inc(r) => {
                push(out, "11111100");
                push_reg(out, *r);
            }
            Instruction::Dec(r) => {
                push(out, "11111101");
                push_reg(out, *r);
            }
            Instruction::Cpy(r, s) => {
                push(out, "11111110");
                push_reg(out, *r);
                push_reg(out, *s);
            }
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Halt => f.write_str("HALT"),
            Instruction::Accept => f.write_str("ACCEPT"),
            Instruction::Reject => f.write_str("REJECT"),
            Instruction::Unknown => f.write_str("UNKNOWN"),
            Instruction::Emit0 => f.write_str("EMIT0"),
            Instruction::Emit1 => f.write_str("EMIT1"),
            Instruction::Quote(lit) if lit.is_empty() => f.write_str("QUOTE"),
            Instruction::Quote(lit) => write!(f, "QUOTE {lit}"),
            Instruction::Match(m, lit) if lit.is_empty() => write!(f, "MATCH {}", m.mnemonic()),
            Instruction::Match(m, lit) => write!(f, "MATCH {} {lit}", m.mnemonic()),
            Instruction::Read(r) => write!(f, "READ {r}"),
            Instruction::Inc(r) => write!(f, "INC {r}"),
            Instruction::Dec(r) => write!(f, "DEC {r}"),
            Instruction::Jz(r, d) => write!(f, "JZ {r} {d:+}"),
            Instruction::Jmp(d) => write!(f, "JMP {d:+}"),
            Instruction::Jeof(d) => write!(f, "JEOF {d:+}"),
            Instruction::Cpy(r, s) => write!(f, "CPY {r} {s}"),
        }
    }
}

/// A program is its full bitstring; its length is the measured quantity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Program {
    bits: BitString,
}

impl Program {
    pub fn new(bits: BitString) -> Self {
        Self { bits }
    }

    pub fn empty() -> Self {
        Self::new(BitString::new())
    }

    pub fn from_instructions(instrs: &[Instruction]) -> Self {
        Self::new(encode(instrs))
    }

    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn decode(&self) -> Result<Vec<Instruction>, Malformed> {
        decode(self.bits.as_slice())
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.bits.fmt(f)
    }
}

/// Why a bitstring is not a program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Malformed {
    UndefinedOpcode { at: usize },
    Truncated { at: usize },
}

impl fmt::Display for Malformed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Malformed::UndefinedOpcode { at } => write!(f, "undefined opcode at bit {at}"),
            Malformed::Truncated { at } => write!(f, "truncated instruction at bit {at}"),
        }
    }
}

impl std::error::Error for Malformed {}

/// Concatenated encodings. A tail-literal instruction anywhere but last
/// produces bits that decode differently.
pub fn encode(instrs: &[Instruction]) -> BitString {
    let mut out = BitString::new();
    for i in instrs {
        i.encode_into(&mut out);
    }
    out
}

/// Decodes a whole bitstring. Linear in its length.
pub fn decode(bits: &[bool]) -> Result<Vec<Instruction>, Malformed> {
    let mut out = Vec::with_capacity(bits.len() / 4 + 1);
    let mut pos = 0;
    while pos < bits.len() {
        let start = pos;
        let mut take = |n: usize| -> Result<u8, Malformed> {
            if pos + n > bits.len() {
                return Err(Malformed::Truncated { at: start });
            }
            let v = bits[pos..pos + n]
                .iter()
                .fold(0u8, |acc, &b| (acc << 1) | b as u8);
            pos += n;
            Ok(v)
        };
        let reg = |v: u8| Reg(v);
        let off = |v: u8| ((v << 4) as i8) >> 4;
        let instr = match take(2)? {
            0b00 => {
                out.push(Instruction::Quote(BitString::from_bits(
                    bits[pos..].to_vec(),
                )));
                return Ok(out);
            }
            0b01 => {
                let m = MatchMode::ALL[take(2)? as usize];
                out.push(Instruction::Match(
                    m,
                    BitString::from_bits(bits[pos..].to_vec()),
                ));
                return Ok(out);
            }
            0b10 => match take(1)? {
                0 => Instruction::Accept,
                _ => Instruction::Reject,
            },
            _ => match take(2)? {
                0b00 => Instruction::Unknown,
                0b01 => Instruction::Halt,
                0b10 => match take(1)? {
                    0 => Instruction::Read(reg(take(REG_BITS)?)),
                    _ => {
                        let r = reg(take(REG_BITS)?);
                        Instruction::Jz(r, off(take(OFFSET_BITS)?))
                    }
                },
                _ => match take(1)? {
                    0 => match take(1)? {
                        0 => Instruction::Jmp(off(take(OFFSET_BITS)?)),
                        _ => Instruction::Jeof(off(take(OFFSET_BITS)?)),
                    },
                    _ => match take(1)? {
                        0 => match take(1)? {
                            0 => Instruction::Emit0,
                            _ => Instruction::Emit1,
                        },
                        _ => match take(2)? {
                            0b00 => Instruction::Inc(reg(take(REG_BITS)?)),
                            0b01 => Instruction::Dec(reg(take(REG_BITS)?)),
                            0b10 => {
                                let r = reg(take(REG_BITS)?);
                                Instruction::Cpy(r, reg(take(REG_BITS)?))
                            }
                            _ => return Err(Malformed::UndefinedOpcode { at: start }),
                        },
                    },
                },
            },
        };
        out.push(instr);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    #[test]
    fn empty_decodes_to_nothing() {
        assert_eq!(decode(&[]), Ok(vec![]));
    }

    #[test]
    fn short_all_ones_is_malformed() {
        assert_eq!(
            decode(bits("111").as_slice()),
            Err(Malformed::Truncated { at: 0 })
        );
        assert_eq!(
            decode(bits("11111111").as_slice()),
            Err(Malformed::UndefinedOpcode { at: 0 })
        );
    }

    #[test]
    fn widths_match_encoding() {
        let all = [
            Instruction::Halt,
            Instruction::Accept,
            Instruction::Reject,
            Instruction::Unknown,
            Instruction::Emit0,
            Instruction::Emit1,
            Instruction::Read(Reg(1)),
            Instruction::Inc(Reg(0)),
            Instruction::Dec(Reg(1)),
            Instruction::Jz(Reg(1), -8),
            Instruction::Jmp(7),
            Instruction::Jeof(-1),
            Instruction::Cpy(Reg(0), Reg(1)),
            Instruction::Quote(bits("")),
            Instruction::Quote(bits("0110")),
            Instruction::Match(MatchMode::AcceptUnknown, bits("1")),
        ];
        for i in all {
            let enc = encode(std::slice::from_ref(&i));
            assert_eq!(enc.len(), i.width(), "{i}");
            assert_eq!(decode(enc.as_slice()), Ok(vec![i]));
        }
    }

    #[test]
    fn tail_literal_swallows_the_rest() {
        let p = bits("100").concat(&bits("0011111111"));
        assert_eq!(
            decode(p.as_slice()),
            Ok(vec![
                Instruction::Accept,
                Instruction::Quote(bits("11111111"))
            ])
        );
        for (code, m) in ["0100", "0101", "0110", "0111"].iter().zip(MatchMode::ALL) {
            assert_eq!(
                decode(bits(code).as_slice()),
                Ok(vec![Instruction::Match(m, BitString::new())])
            );
        }
    }

    #[test]
    fn offsets_sign_extend() {
        let p = encode(&[Instruction::Jmp(-3)]);
        assert_eq!(p, bits("1111001101"));
        assert_eq!(decode(p.as_slice()), Ok(vec![Instruction::Jmp(-3)]));
    }
}
