//! The reference machine: a two-register, step-counted toy computer with a
//! read-only input tape and an append-only output tape. Every program length
//! reported by the lab is measured on this machine.

pub mod asm;
pub mod enumerate;
pub mod interp;
pub mod isa;

pub use asm::{assemble, disassemble, AsmError};
pub use enumerate::{enumerate_programs, index_of, program_at, program_count};
pub use interp::{run_acceptor, run_generator, Decoded, ExecutionBudget, OutcomeKind, RunOutcome};
pub use isa::{decode, encode, Instruction, Malformed, MatchMode, Program, Reg};
