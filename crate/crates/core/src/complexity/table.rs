//! Whole-universe tables: one enumeration pass answers a measure for every
//! instance at once. Used by the corpus-level experiments, where calling the
//! per-instance searches 2^n times would repeat the same program runs.

use std::collections::HashMap;

use rayon::prelude::*;

use super::search::{truth_table, ComplexityError};
use super::{ComplexityValue, SearchLimits, MAX_PROGRAM_LEN_CAP};
use crate::bits::BitString;
use crate::machine::{program_at, program_count, Decoded, ExecutionBudget, OutcomeKind, Program};
use crate::problems::LanguageOracle;
use crate::verdict::Verdict;

fn index_range(len: usize) -> std::ops::Range<u64> {
    ((1u64 << len) - 1)..((1u64 << (len + 1)) - 1)
}

fn keep_min(slot: &mut Option<u64>, i: u64) {
    if slot.map_or(true, |cur| i < cur) {
        *slot = Some(i);
    }
}

fn merge_min(mut a: Vec<Option<u64>>, b: Vec<Option<u64>>) -> Vec<Option<u64>> {
    for (x, y) in a.iter_mut().zip(b) {
        if let Some(i) = y {
            keep_min(x, i);
        }
    }
    a
}

fn to_value(slot: Option<u64>, limit: usize) -> ComplexityValue {
    match slot {
        Some(i) => ComplexityValue::exact(program_at(i)),
        None => ComplexityValue::AboveLimit { limit },
    }
}

/// Shortest generator for every output produced by some program up to
/// `max_len` bits.
#[derive(Debug, Clone)]
pub struct GeneratorTable {
    max_len: usize,
    budget: ExecutionBudget,
    first: HashMap<BitString, u64>,
}

impl GeneratorTable {
    pub fn build(max_len: usize, budget: ExecutionBudget) -> Result<Self, ComplexityError> {
        if max_len > MAX_PROGRAM_LEN_CAP {
            return Err(ComplexityError::LimitTooLarge(max_len));
        }
        let first = (0..program_count(max_len))
            .into_par_iter()
            .fold(HashMap::new, |mut acc: HashMap<BitString, u64>, i| {
                if let Ok(d) = Decoded::new(&program_at(i)) {
                    if let OutcomeKind::HaltedOutput(out) = d.run_generator(budget).kind {
                        acc.entry(out)
                            .and_modify(|cur| *cur = (*cur).min(i))
                            .or_insert(i);
                    }
                }
                acc
            })
            .reduce(HashMap::new, |mut a, b| {
                for (k, i) in b {
                    a.entry(k)
                        .and_modify(|cur| *cur = (*cur).min(i))
                        .or_insert(i);
                }
                a
            });
        Ok(Self {
            max_len,
            budget,
            first,
        })
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn budget(&self) -> ExecutionBudget {
        self.budget
    }

    /// Same value as [`c_t`](super::c_t) with matching limits.
    pub fn c_value(&self, x: &BitString) -> ComplexityValue {
        to_value(self.first.get(x).copied(), self.max_len)
    }

    /// Every distinct output with its shortest producer, in enumeration
    /// order of the producers.
    pub fn outputs(&self) -> Vec<(BitString, Program)> {
        let mut v: Vec<_> = self.first.iter().map(|(o, &i)| (i, o.clone())).collect();
        v.sort_unstable_by_key(|(i, _)| *i);
        v.into_iter().map(|(i, o)| (o, program_at(i))).collect()
    }

    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }
}

/// Distinguishing and instance complexity for every member of a universe,
/// computed from each program's verdict vector in a single pass.
#[derive(Debug, Clone)]
pub struct AcceptorTable {
    limits: SearchLimits,
    members: Vec<BitString>,
    cd: Vec<Option<u64>>,
    ic: Vec<Option<u64>>,
    language: String,
}

impl AcceptorTable {
    pub fn build(
        lang: &dyn LanguageOracle,
        limits: &SearchLimits,
    ) -> Result<Self, ComplexityError> {
        if limits.max_program_len > MAX_PROGRAM_LEN_CAP {
            return Err(ComplexityError::LimitTooLarge(limits.max_program_len));
        }
        let members = limits.universe.members();
        let truth = truth_table(lang, &members)?;
        let u = members.len();
        let budget = limits.step_budget;
        let mut cd = vec![None; u];
        let mut ic = vec![None; u];

        for len in 0..=limits.max_program_len {
            if cd.iter().chain(&ic).all(Option::is_some) {
                break;
            }
            let (cd_len, ic_len) = index_range(len)
                .into_par_iter()
                .fold(
                    || (vec![None; u], vec![None; u]),
                    |(mut cd_acc, mut ic_acc), i| {
                        let Ok(d) = Decoded::new(&program_at(i)) else {
                            return (cd_acc, ic_acc);
                        };
                        let verdicts: Vec<Verdict> = members
                            .iter()
                            .map(|y| d.run_acceptor(y, budget).verdict())
                            .collect();
                        let accepts: Vec<usize> = verdicts
                            .iter()
                            .enumerate()
                            .filter(|(_, v)| **v == Verdict::Accept)
                            .map(|(j, _)| j)
                            .collect();
                        if accepts.len() == 1 && verdicts.iter().all(|v| v.is_known()) {
                            keep_min(&mut cd_acc[accepts[0]], i);
                        }
                        if verdicts
                            .iter()
                            .zip(&truth)
                            .all(|(v, &t)| v.consistent_with(t))
                        {
                            for (j, v) in verdicts.iter().enumerate() {
                                if v.is_known() {
                                    keep_min(&mut ic_acc[j], i);
                                }
                            }
                        }
                        (cd_acc, ic_acc)
                    },
                )
                .reduce(
                    || (vec![None; u], vec![None; u]),
                    |(a1, b1), (a2, b2)| (merge_min(a1, a2), merge_min(b1, b2)),
                );
            // shorter lengths always win
            for (slot, found) in cd.iter_mut().zip(cd_len) {
                if slot.is_none() {
                    *slot = found;
                }
            }
            for (slot, found) in ic.iter_mut().zip(ic_len) {
                if slot.is_none() {
                    *slot = found;
                }
            }
        }
        Ok(Self {
            limits: *limits,
            members,
            cd,
            ic,
            language: lang.name().to_string(),
        })
    }

    pub fn limits(&self) -> &SearchLimits {
        &self.limits
    }

    pub fn language(&self) -> &str {
        &self.language
    }

    pub fn members(&self) -> &[BitString] {
        &self.members
    }

    pub fn cd_value(&self, x: &BitString) -> Option<ComplexityValue> {
        let j = self.limits.universe.index_of(x)?;
        Some(to_value(self.cd[j], self.limits.max_program_len))
    }

    pub fn ic_value(&self, x: &BitString) -> Option<ComplexityValue> {
        let j = self.limits.universe.index_of(x)?;
        Some(to_value(self.ic[j], self.limits.max_program_len))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::{c_t, cd_t, ic_t, UniverseSpec};
    use crate::machine::index_of;
    use crate::problems::Language;

    /// The looping PARITY decider is 68 bits, so at length 14 every 8-bit
    /// string is decided by its own literal match and classifies hard.
    #[test]
    fn parity_length_eight_is_hard_at_this_scale() {
        use crate::complexity::Hardness;
        let limits = SearchLimits::new(14, 256, UniverseSpec::SameLength(8));
        let t = AcceptorTable::build(&Language::Parity, &limits).unwrap();
        for x in BitString::all_of_length(8) {
            let cd = t.cd_value(&x).unwrap().value().unwrap();
            let ic = t.ic_value(&x).unwrap().value().unwrap();
            assert_eq!((cd, ic), (12, 12));
            assert_eq!(Hardness::from_values(cd, ic, 4), Hardness::Hard);
        }
        let parity = crate::machine::assemble(crate::machine::asm::PARITY_SRC).unwrap();
        assert_eq!(parity.len(), 68);
    }

    #[test]
    fn generator_table_matches_search() {
        let budget = ExecutionBudget::new(64);
        let t = GeneratorTable::build(12, budget).unwrap();
        for n in 1..=3 {
            for x in BitString::all_of_length(n) {
                let l = SearchLimits::new(12, 64, UniverseSpec::SameLength(n));
                assert_eq!(t.c_value(&x), c_t(&x, &l).unwrap(), "{x}");
            }
        }
        let outs = t.outputs();
        assert!(outs
            .windows(2)
            .all(|w| index_of(&w[0].1) < index_of(&w[1].1)));
    }

    #[test]
    fn acceptor_table_matches_search() {
        for lang in [Language::Parity, Language::Majority] {
            let l = SearchLimits::new(13, 64, UniverseSpec::SameLength(2));
            let t = AcceptorTable::build(&lang, &l).unwrap();
            for x in l.universe.members() {
                assert_eq!(t.cd_value(&x).unwrap(), cd_t(&x, &l).unwrap(), "cd {x}");
                assert_eq!(
                    t.ic_value(&x).unwrap(),
                    ic_t(&x, &lang, &l).unwrap(),
                    "ic {lang} {x}"
                );
            }
        }
    }
}
