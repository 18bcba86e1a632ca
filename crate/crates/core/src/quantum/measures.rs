//! Quantum measures: a program's length counts when its generator output
//! decodes to a circuit with the required behaviour.
//!
//! Register layouts:
//!
//! * generation: start from `|0…0⟩`, read the measured qubits;
//! * distinguishing: `y` loaded on qubits `0..|y|`, accept when every
//!   measured qubit reads 1;
//! * consistency: `y` loaded the same way, on a register of at least two
//!   qubits; afterwards qubit 0 signals confidence and qubit 1 carries the
//!   answer. Both start out holding input bits when `|y| >= 2`.
//!
//! The register grows to fit the input when the circuit declares fewer
//! qubits. All thresholds are checked on exact probabilities.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::circuit::GateCircuit;
use super::sim::{run_on_input, simulate};
use crate::bits::BitString;
use crate::complexity::{
    first_program, truth_table, ComplexityError, ComplexityValue, GeneratorTable, SearchLimits,
    UniverseSpec,
};
use crate::machine::{index_of, program_at, run_generator, Program};
use crate::problems::LanguageOracle;
use crate::scalar::Scalar;

pub const DEFAULT_EPSILON: f64 = 0.1;
pub const CONFIDENCE_QUBIT: usize = 0;
pub const ANSWER_QUBIT: usize = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("epsilon {value} outside {range}")]
    Epsilon { value: f64, range: &'static str },
    #[error(transparent)]
    Complexity(#[from] ComplexityError),
}

fn check_eps(value: f64, half_open_unit: bool) -> Result<(), QuantumError> {
    let ok = if half_open_unit {
        value > 0.0 && value <= 1.0
    } else {
        value > 0.0 && value < 0.5
    };
    if ok {
        Ok(())
    } else {
        Err(QuantumError::Epsilon {
            value,
            range: if half_open_unit { "(0, 1]" } else { "(0, 1/2)" },
        })
    }
}

/// Confidence and answer marginals of a consistency-layout run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfidenceReadout {
    /// P(q0 = 1).
    pub p_know: f64,
    /// P(q1 = χ_L(y)).
    pub p_correct: f64,
}

impl ConfidenceReadout {
    pub fn confident(&self, eps: f64) -> bool {
        self.p_know.gt_tol(&(0.5 + eps)) && self.p_correct.gt_tol(&(0.5 + eps))
    }

    pub fn abstains(&self, eps: f64) -> bool {
        (1.0 - self.p_know).gt_tol(&(0.5 + eps))
    }
}

pub fn output_probability(c: &GateCircuit, x: &BitString) -> Option<f64> {
    simulate::<f64>(c).ok().map(|d| d.prob(x))
}

pub fn acceptance_probability(c: &GateCircuit, y: &BitString) -> Option<f64> {
    let sv = run_on_input::<f64>(c, y, 0).ok()?;
    Some(sv.prob_all_ones(c.measured()))
}

pub fn confidence_readout(c: &GateCircuit, y: &BitString, chi: bool) -> Option<ConfidenceReadout> {
    let sv = run_on_input::<f64>(c, y, ANSWER_QUBIT + 1).ok()?;
    Some(ConfidenceReadout {
        p_know: sv.prob_qubit(CONFIDENCE_QUBIT, true),
        p_correct: sv.prob_qubit(ANSWER_QUBIT, chi),
    })
}

/// Acceptance probabilities that single out exactly one member, if any.
fn distinguished(accept: &[f64], eps: f64) -> Option<usize> {
    let hi = 0.5 + eps;
    let lo = 0.5 - eps;
    let mut hit = None;
    for (j, p) in accept.iter().enumerate() {
        if p.gt_tol(&hi) {
            if hit.is_some() {
                return None;
            }
            hit = Some(j);
        } else if !lo.gt_tol(p) {
            return None;
        }
    }
    hit
}

fn circuit_of(p: &Program, limits: &SearchLimits) -> Option<GateCircuit> {
    let out = run_generator(p, limits.step_budget);
    GateCircuit::decode(out.output()?).ok()
}

fn censored(found: Option<Program>, limits: &SearchLimits) -> ComplexityValue {
    match found {
        Some(p) => ComplexityValue::exact(p),
        None => ComplexityValue::AboveLimit {
            limit: limits.max_program_len,
        },
    }
}

fn check_len(limits: &SearchLimits) -> Result<(), QuantumError> {
    if limits.max_program_len > crate::complexity::MAX_PROGRAM_LEN_CAP {
        return Err(ComplexityError::LimitTooLarge(limits.max_program_len).into());
    }
    Ok(())
}

/// Shortest program emitting a circuit that outputs `x` with probability `>= eps`.
pub fn qc_t(
    x: &BitString,
    eps: f64,
    limits: &SearchLimits,
) -> Result<ComplexityValue, QuantumError> {
    check_eps(eps, true)?;
    check_len(limits)?;
    if x.is_empty() {
        return Err(ComplexityError::EmptyInstance.into());
    }
    let found = first_program(limits.max_program_len, |p| {
        circuit_of(p, limits)
            .and_then(|c| output_probability(&c, x))
            .is_some_and(|pr| pr.ge_tol(&eps))
    });
    Ok(censored(found, limits))
}

/// Shortest program emitting a circuit accepting `x` with probability
/// `> 1/2 + eps` and every other universe member with probability `< 1/2 - eps`.
pub fn qcd_t(
    x: &BitString,
    eps: f64,
    limits: &SearchLimits,
) -> Result<ComplexityValue, QuantumError> {
    check_eps(eps, false)?;
    check_len(limits)?;
    let target = limits
        .universe
        .index_of(x)
        .ok_or_else(|| ComplexityError::NotInUniverse(x.clone()))?;
    let members = limits.universe.members();
    let found = first_program(limits.max_program_len, |p| {
        let Some(c) = circuit_of(p, limits) else {
            return false;
        };
        let Some(px) = acceptance_probability(&c, x) else {
            return false;
        };
        if !px.gt_tol(&(0.5 + eps)) {
            return false;
        }
        let accept: Option<Vec<f64>> = members
            .iter()
            .map(|y| acceptance_probability(&c, y))
            .collect();
        accept.is_some_and(|a| distinguished(&a, eps) == Some(target))
    });
    Ok(censored(found, limits))
}

/// Shortest program emitting a quantum-ε-consistent circuit that is confident on `x`.
pub fn qic_t(
    x: &BitString,
    lang: &dyn LanguageOracle,
    eps: f64,
    limits: &SearchLimits,
) -> Result<ComplexityValue, QuantumError> {
    check_eps(eps, false)?;
    check_len(limits)?;
    let target = limits
        .universe
        .index_of(x)
        .ok_or_else(|| ComplexityError::NotInUniverse(x.clone()))?;
    let members = limits.universe.members();
    let truth = truth_table(lang, &members)?;
    let found = first_program(limits.max_program_len, |p| {
        let Some(c) = circuit_of(p, limits) else {
            return false;
        };
        match confidence_readout(&c, x, truth[target]) {
            Some(r) if r.confident(eps) => {}
            _ => return false,
        }
        is_quantum_consistent_on(&c, &members, &truth, eps)
    });
    Ok(censored(found, limits))
}

fn is_quantum_consistent_on(
    c: &GateCircuit,
    members: &[BitString],
    truth: &[bool],
    eps: f64,
) -> bool {
    members.iter().zip(truth).all(|(y, &t)| {
        confidence_readout(c, y, t).is_some_and(|r| r.confident(eps) || r.abstains(eps))
    })
}

/// Whether every universe member gets a confident correct answer or a
/// confident abstention.
pub fn is_quantum_consistent(
    c: &GateCircuit,
    lang: &dyn LanguageOracle,
    eps: f64,
    universe: &UniverseSpec,
) -> Result<bool, QuantumError> {
    check_eps(eps, false)?;
    let members = universe.members();
    let truth = truth_table(lang, &members)?;
    Ok(is_quantum_consistent_on(c, &members, &truth, eps))
}

/// Every decodable circuit among the shortest generator outputs, in
/// enumeration order of their programs. One build serves all quantum
/// measures for a corpus.
#[derive(Debug, Clone)]
pub struct CircuitTable {
    max_len: usize,
    entries: Vec<(u64, GateCircuit)>,
}

impl CircuitTable {
    pub fn from_generators(table: &GeneratorTable) -> Self {
        let entries = table
            .outputs()
            .into_par_iter()
            .filter_map(|(out, p)| GateCircuit::decode(&out).ok().map(|c| (index_of(&p), c)))
            .collect();
        Self {
            max_len: table.max_len(),
            entries,
        }
    }

    pub fn build(limits: &SearchLimits) -> Result<Self, ComplexityError> {
        Ok(Self::from_generators(&GeneratorTable::build(
            limits.max_program_len,
            limits.step_budget,
        )?))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn value(&self, i: Option<u64>) -> ComplexityValue {
        match i {
            Some(i) => ComplexityValue::exact(program_at(i)),
            None => ComplexityValue::AboveLimit {
                limit: self.max_len,
            },
        }
    }

    fn first_min(
        &self,
        slots: usize,
        hits: impl Fn(&GateCircuit) -> Vec<usize> + Sync,
    ) -> Vec<Option<u64>> {
        self.entries
            .par_iter()
            .fold(
                || vec![None; slots],
                |mut acc: Vec<Option<u64>>, (i, c)| {
                    for j in hits(c) {
                        if acc[j].map_or(true, |cur| *i < cur) {
                            acc[j] = Some(*i);
                        }
                    }
                    acc
                },
            )
            .reduce(
                || vec![None; slots],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        if let Some(i) = y {
                            if x.map_or(true, |cur| i < cur) {
                                *x = Some(i);
                            }
                        }
                    }
                    a
                },
            )
    }

    /// QC for every string in `targets`.
    pub fn qc_values(
        &self,
        targets: &[BitString],
        eps: f64,
    ) -> Result<Vec<ComplexityValue>, QuantumError> {
        check_eps(eps, true)?;
        let slots = self.first_min(targets.len(), |c| match simulate::<f64>(c) {
            Ok(d) => targets
                .iter()
                .enumerate()
                .filter(|(_, x)| d.prob(x).ge_tol(&eps))
                .map(|(j, _)| j)
                .collect(),
            Err(_) => Vec::new(),
        });
        Ok(slots.into_iter().map(|s| self.value(s)).collect())
    }

    /// QCD for every member of the universe, in member order.
    pub fn qcd_values(
        &self,
        universe: &UniverseSpec,
        eps: f64,
    ) -> Result<Vec<ComplexityValue>, QuantumError> {
        check_eps(eps, false)?;
        let members = universe.members();
        let slots = self.first_min(members.len(), |c| {
            let accept: Option<Vec<f64>> = members
                .iter()
                .map(|y| acceptance_probability(c, y))
                .collect();
            accept
                .and_then(|a| distinguished(&a, eps))
                .into_iter()
                .collect()
        });
        Ok(slots.into_iter().map(|s| self.value(s)).collect())
    }

    /// Qic for every member of the universe, in member order.
    pub fn qic_values(
        &self,
        lang: &dyn LanguageOracle,
        universe: &UniverseSpec,
        eps: f64,
    ) -> Result<Vec<ComplexityValue>, QuantumError> {
        check_eps(eps, false)?;
        let members = universe.members();
        let truth = truth_table(lang, &members)?;
        let slots = self.first_min(members.len(), |c| {
            let mut confident = Vec::new();
            for (j, (y, &t)) in members.iter().zip(&truth).enumerate() {
                match confidence_readout(c, y, t) {
                    Some(r) if r.confident(eps) => confident.push(j),
                    Some(r) if r.abstains(eps) => {}
                    _ => return Vec::new(),
                }
            }
            confident
        });
        Ok(slots.into_iter().map(|s| self.value(s)).collect())
    }
}
