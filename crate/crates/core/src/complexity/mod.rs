//! Exact time-bounded classical measures by program enumeration.
//!
//! * `c_t`: shortest generator that prints `x` within the step budget.
//! * `cd_t`: shortest acceptor that accepts `x` and rejects every other
//!   member of the universe.
//! * `ic_t`: shortest acceptor that is consistent with the language on the
//!   whole universe (every non-⊥ answer is correct) and answers on `x`.
//!
//! Distinguishing and consistency are checked over a finite [`UniverseSpec`]
//! only, which is what makes the measures computable. Programs are scanned in
//! length-then-lexicographic order and the first witness wins, so results do
//! not depend on how the scan is split across workers.

mod report;
mod search;
mod table;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use report::{ComplexityReport, ProgramHex};
pub use search::{
    c_t, cd_t, classify_instance, ic_t, is_consistent, utility_set, ComplexityError, Hardness,
    UtilitySet,
};
pub(crate) use search::{first_program, truth_table};
pub use table::{AcceptorTable, GeneratorTable};

use crate::bits::BitString;
use crate::machine::{ExecutionBudget, Program};

/// Largest enumeration depth accepted by the default profiles.
pub const MAX_PROGRAM_LEN_CAP: usize = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n")]
pub enum UniverseSpec {
    SameLength(usize),
    UpToLength(usize),
}

impl UniverseSpec {
    pub fn members(&self) -> Vec<BitString> {
        match *self {
            UniverseSpec::SameLength(n) => BitString::all_of_length(n).collect(),
            UniverseSpec::UpToLength(n) => (0..=n).flat_map(BitString::all_of_length).collect(),
        }
    }

    pub fn size(&self) -> usize {
        match *self {
            UniverseSpec::SameLength(n) => 1 << n,
            UniverseSpec::UpToLength(n) => (1 << (n + 1)) - 1,
        }
    }

    pub fn contains(&self, x: &BitString) -> bool {
        match *self {
            UniverseSpec::SameLength(n) => x.len() == n,
            UniverseSpec::UpToLength(n) => x.len() <= n,
        }
    }

    /// Position of `x` in [`members`](Self::members).
    pub fn index_of(&self, x: &BitString) -> Option<usize> {
        if !self.contains(x) {
            return None;
        }
        let v = x.to_uint()? as usize;
        Some(match self {
            UniverseSpec::SameLength(_) => v,
            UniverseSpec::UpToLength(_) => (1 << x.len()) - 1 + v,
        })
    }
}

impl fmt::Display for UniverseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniverseSpec::SameLength(n) => write!(f, "same-length({n})"),
            UniverseSpec::UpToLength(n) => write!(f, "up-to-length({n})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchLimits {
    pub max_program_len: usize,
    pub step_budget: ExecutionBudget,
    pub universe: UniverseSpec,
}

impl SearchLimits {
    pub fn new(max_program_len: usize, max_steps: u64, universe: UniverseSpec) -> Self {
        Self {
            max_program_len,
            step_budget: ExecutionBudget::new(max_steps),
            universe,
        }
    }

    /// Same-length universe for `x` (the default distinguishing universe).
    pub fn for_instance(x: &BitString, max_program_len: usize, max_steps: u64) -> Self {
        Self::new(
            max_program_len,
            max_steps,
            UniverseSpec::SameLength(x.len()),
        )
    }
}

/// Result of a shortest-program search. `AboveLimit` is a censored
/// measurement: no witness exists up to `limit` bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ComplexityValue {
    Exact { bits: usize, witness: Program },
    AboveLimit { limit: usize },
}

impl ComplexityValue {
    pub fn exact(witness: Program) -> Self {
        ComplexityValue::Exact {
            bits: witness.len(),
            witness,
        }
    }

    pub fn value(&self) -> Option<usize> {
        match self {
            ComplexityValue::Exact { bits, .. } => Some(*bits),
            ComplexityValue::AboveLimit { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&Program> {
        match self {
            ComplexityValue::Exact { witness, .. } => Some(witness),
            ComplexityValue::AboveLimit { .. } => None,
        }
    }

    pub fn is_censored(&self) -> bool {
        matches!(self, ComplexityValue::AboveLimit { .. })
    }

    /// Smallest value consistent with the measurement.
    pub fn lower_bound(&self) -> usize {
        match self {
            ComplexityValue::Exact { bits, .. } => *bits,
            ComplexityValue::AboveLimit { limit } => limit + 1,
        }
    }

    /// Largest value consistent with the measurement (`None` = unbounded).
    pub fn upper_bound(&self) -> Option<usize> {
        self.value()
    }
}

impl fmt::Display for ComplexityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexityValue::Exact { bits, .. } => write!(f, "{bits}"),
            ComplexityValue::AboveLimit { limit } => write!(f, ">{limit}"),
        }
    }
}

/// Whether the measurements prove `lhs > rhs + slack`, reading censored
/// values as intervals.
pub fn provably_exceeds(lhs: &ComplexityValue, rhs: &ComplexityValue, slack: i64) -> bool {
    match rhs.upper_bound() {
        Some(r) => lhs.lower_bound() as i64 > r as i64 + slack,
        None => false,
    }
}

/// Tight `lhs - rhs` when both are exact.
pub fn exact_difference(lhs: &ComplexityValue, rhs: &ComplexityValue) -> Option<i64> {
    Some(lhs.value()? as i64 - rhs.value()? as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    #[test]
    fn universe_indexing() {
        let u = UniverseSpec::UpToLength(2);
        let m = u.members();
        assert_eq!(m.len(), u.size());
        for (i, x) in m.iter().enumerate() {
            assert_eq!(u.index_of(x), Some(i));
        }
        assert_eq!(UniverseSpec::SameLength(3).index_of(&bits("101")), Some(5));
        assert_eq!(UniverseSpec::SameLength(3).index_of(&bits("10")), None);
    }

    #[test]
    fn interval_comparison() {
        let exact = |n: usize| ComplexityValue::Exact {
            bits: n,
            witness: Program::new(BitString::zeros(n)),
        };
        let cens = ComplexityValue::AboveLimit { limit: 10 };
        assert!(provably_exceeds(&exact(12), &exact(5), 6));
        assert!(!provably_exceeds(&exact(11), &exact(5), 6));
        assert!(!provably_exceeds(&exact(12), &cens, 0));
        assert!(provably_exceeds(&cens, &exact(5), 5));
        assert!(!provably_exceeds(&cens, &exact(5), 6));
    }
}
