use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ComplexityValue, SearchLimits, MAX_PROGRAM_LEN_CAP};
use crate::bits::BitString;
use crate::machine::{program_at, Decoded, OutcomeKind, Program};
use crate::problems::LanguageOracle;
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexityError {
    #[error("instance must be non-empty")]
    EmptyInstance,
    #[error("instance {0} is not in the universe")]
    NotInUniverse(BitString),
    #[error("language is undefined on universe member {0}")]
    LanguageUndefined(BitString),
    #[error("program is not consistent with the language: wrong answer on {0}")]
    Inconsistent(BitString),
    #[error("max_program_len {0} exceeds the enumeration cap {MAX_PROGRAM_LEN_CAP}")]
    LimitTooLarge(usize),
    #[error("a measure is censored; classification is indeterminate")]
    Indeterminate,
}

/// First program (in enumeration order) of length `<= max_len` satisfying
/// `pred`. Each length is scanned in parallel; `find_first` keeps the result
/// schedule-independent.
pub(crate) fn first_program<F>(max_len: usize, pred: F) -> Option<Program>
where
    F: Fn(&Program) -> bool + Sync,
{
    (0..=max_len).find_map(|len| {
        let start = (1u64 << len) - 1;
        let end = (1u64 << (len + 1)) - 1;
        (start..end)
            .into_par_iter()
            .find_first(|&i| pred(&program_at(i)))
            .map(program_at)
    })
}

fn check_limits(limits: &SearchLimits) -> Result<(), ComplexityError> {
    if limits.max_program_len > MAX_PROGRAM_LEN_CAP {
        return Err(ComplexityError::LimitTooLarge(limits.max_program_len));
    }
    Ok(())
}

fn censored_or(found: Option<Program>, limits: &SearchLimits) -> ComplexityValue {
    match found {
        Some(p) => ComplexityValue::exact(p),
        None => ComplexityValue::AboveLimit {
            limit: limits.max_program_len,
        },
    }
}

/// χ_L on every universe member, in member order.
pub(crate) fn truth_table(
    lang: &dyn LanguageOracle,
    members: &[BitString],
) -> Result<Vec<bool>, ComplexityError> {
    members
        .iter()
        .map(|y| {
            lang.chi(y)
                .ok_or_else(|| ComplexityError::LanguageUndefined(y.clone()))
        })
        .collect()
}

/// Time-bounded Kolmogorov complexity.
pub fn c_t(x: &BitString, limits: &SearchLimits) -> Result<ComplexityValue, ComplexityError> {
    if x.is_empty() {
        return Err(ComplexityError::EmptyInstance);
    }
    check_limits(limits)?;
    let found = first_program(limits.max_program_len, |p| {
        Decoded::new(p).is_ok_and(|d| {
            matches!(d.run_generator(limits.step_budget).kind,
                     OutcomeKind::HaltedOutput(ref out) if out == x)
        })
    });
    Ok(censored_or(found, limits))
}

/// Time-bounded distinguishing complexity over the universe.
pub fn cd_t(x: &BitString, limits: &SearchLimits) -> Result<ComplexityValue, ComplexityError> {
    let target = limits
        .universe
        .index_of(x)
        .ok_or_else(|| ComplexityError::NotInUniverse(x.clone()))?;
    check_limits(limits)?;
    let members = limits.universe.members();
    let budget = limits.step_budget;
    let found = first_program(limits.max_program_len, |p| {
        let Ok(d) = Decoded::new(p) else { return false };
        if d.run_acceptor(x, budget).verdict() != Verdict::Accept {
            return false;
        }
        members
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != target)
            .all(|(_, y)| d.run_acceptor(y, budget).verdict() == Verdict::Reject)
    });
    Ok(censored_or(found, limits))
}

/// Time-bounded instance complexity, consistency checked over the universe.
pub fn ic_t(
    x: &BitString,
    lang: &dyn LanguageOracle,
    limits: &SearchLimits,
) -> Result<ComplexityValue, ComplexityError> {
    let target = limits
        .universe
        .index_of(x)
        .ok_or_else(|| ComplexityError::NotInUniverse(x.clone()))?;
    check_limits(limits)?;
    let members = limits.universe.members();
    let truth = truth_table(lang, &members)?;
    let budget = limits.step_budget;
    let want = Verdict::from_bool(truth[target]);
    let found = first_program(limits.max_program_len, |p| {
        let Ok(d) = Decoded::new(p) else { return false };
        if d.run_acceptor(x, budget).verdict() != want {
            return false;
        }
        members
            .iter()
            .zip(&truth)
            .all(|(y, &t)| d.run_acceptor(y, budget).verdict().consistent_with(t))
    });
    Ok(censored_or(found, limits))
}

/// Whether every non-⊥ answer of `p` on the universe agrees with χ_L.
/// Timeouts and malformed programs read as ⊥.
pub fn is_consistent(
    p: &Program,
    lang: &dyn LanguageOracle,
    limits: &SearchLimits,
) -> Result<bool, ComplexityError> {
    Ok(first_inconsistency(p, lang, limits)?.is_none())
}

fn first_inconsistency(
    p: &Program,
    lang: &dyn LanguageOracle,
    limits: &SearchLimits,
) -> Result<Option<BitString>, ComplexityError> {
    let members = limits.universe.members();
    let truth = truth_table(lang, &members)?;
    let Ok(d) = Decoded::new(p) else {
        return Ok(None);
    };
    Ok(members
        .into_iter()
        .zip(truth)
        .find(|(y, t)| {
            !d.run_acceptor(y, limits.step_budget)
                .verdict()
                .consistent_with(*t)
        })
        .map(|(y, _)| y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hardness {
    Easy,
    Hard,
}

impl Hardness {
    /// Hard when `cd - ic <= threshold`.
    pub fn from_values(cd: usize, ic: usize, threshold: i64) -> Self {
        if cd as i64 - ic as i64 <= threshold {
            Hardness::Hard
        } else {
            Hardness::Easy
        }
    }
}

/// Hard/easy classification; refuses when either measure is censored.
pub fn classify_instance(
    x: &BitString,
    lang: &dyn LanguageOracle,
    limits: &SearchLimits,
    threshold: i64,
) -> Result<Hardness, ComplexityError> {
    let cd = cd_t(x, limits)?;
    let ic = ic_t(x, lang, limits)?;
    match (cd.value(), ic.value()) {
        (Some(cd), Some(ic)) => Ok(Hardness::from_values(cd, ic, threshold)),
        _ => Err(ComplexityError::Indeterminate),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UtilitySet {
    pub count: usize,
    pub members: Vec<BitString>,
}

/// The universe members on which a consistent program answers (≠ ⊥).
pub fn utility_set(
    p: &Program,
    lang: &dyn LanguageOracle,
    limits: &SearchLimits,
) -> Result<UtilitySet, ComplexityError> {
    if let Some(y) = first_inconsistency(p, lang, limits)? {
        return Err(ComplexityError::Inconsistent(y));
    }
    let members: Vec<BitString> = match Decoded::new(p) {
        Ok(d) => limits
            .universe
            .members()
            .into_iter()
            .filter(|y| d.run_acceptor(y, limits.step_budget).verdict().is_known())
            .collect(),
        Err(_) => Vec::new(),
    };
    Ok(UtilitySet {
        count: members.len(),
        members,
    })
}
