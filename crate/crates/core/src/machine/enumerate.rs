//! Length-then-lexicographic enumeration of all bitstrings.
//!
//! Program number `i` is the string of length `l` with value `i - (2^l - 1)`,
//! so the enumeration index is itself the search order used by every
//! shortest-program measure.

use super::isa::Program;
use crate::bits::BitString;

/// Number of programs of length `0..=max_len`.
pub fn program_count(max_len: usize) -> u64 {
    assert!(max_len < 63, "max_len {max_len} is not enumerable");
    (1u64 << (max_len + 1)) - 1
}

/// Program at a position of the length-then-lexicographic order.
pub fn program_at(index: u64) -> Program {
    let len = 63 - (index + 1).leading_zeros() as usize;
    let value = index - ((1u64 << len) - 1);
    Program::new(BitString::from_uint(value, len))
}

/// Inverse of [`program_at`].
pub fn index_of(program: &Program) -> u64 {
    let len = program.len();
    ((1u64 << len) - 1)
        + program
            .bits()
            .to_uint()
            .expect("program shorter than 64 bits")
}

pub fn enumerate_programs(max_len: usize) -> impl Iterator<Item = Program> {
    (0..program_count(max_len)).map(program_at)
}
