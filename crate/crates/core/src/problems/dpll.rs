//! DPLL with unit propagation and a decision budget.
//!
//! The budget counts branching decisions only; flips after a conflict and
//! propagated assignments are free. When a decision is needed and the budget
//! is spent, the solver answers ⊥. The branching order is fixed (first
//! unassigned literal of the first unsatisfied clause, positive phase as
//! written), so an answer found at budget `b` is found identically at every
//! larger budget.

use super::cnf::{CnfFormula, Literal};
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub verdict: Verdict,
    pub decisions: u64,
    /// Full assignment when satisfiable (unconstrained variables are false).
    pub model: Option<Vec<bool>>,
}

struct Solver<'a> {
    f: &'a CnfFormula,
    /// 0 unassigned, 1 true, -1 false.
    value: Vec<i8>,
    trail: Vec<Literal>,
    /// Clause indices per literal: `occurs[lit_index(l)]`.
    occurs: Vec<Vec<usize>>,
}

fn lit_index(l: Literal) -> usize {
    let v = l.unsigned_abs() as usize - 1;
    2 * v + (l < 0) as usize
}

impl<'a> Solver<'a> {
    fn new(f: &'a CnfFormula) -> Self {
        let n = f.variable_count() as usize;
        let mut occurs = vec![Vec::new(); 2 * n];
        for (ci, c) in f.clauses().iter().enumerate() {
            for &l in c {
                occurs[lit_index(l)].push(ci);
            }
        }
        Self {
            f,
            value: vec![0; n],
            trail: Vec::new(),
            occurs,
        }
    }

    fn lit_value(&self, l: Literal) -> i8 {
        let v = self.value[l.unsigned_abs() as usize - 1];
        if l > 0 {
            v
        } else {
            -v
        }
    }

    fn assign(&mut self, l: Literal) {
        self.value[l.unsigned_abs() as usize - 1] = if l > 0 { 1 } else { -1 };
        self.trail.push(l);
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let l = self.trail.pop().expect("non-empty trail");
            self.value[l.unsigned_abs() as usize - 1] = 0;
        }
    }

    fn clause_state(&self, ci: usize) -> ClauseState {
        let mut free = None;
        let mut free_count = 0;
        for &l in &self.f.clauses()[ci] {
            match self.lit_value(l) {
                1 => return ClauseState::Satisfied,
                0 => {
                    free_count += 1;
                    free = Some(l);
                }
                _ => {}
            }
        }
        match (free_count, free) {
            (0, _) => ClauseState::Conflict,
            (1, Some(l)) => ClauseState::Unit(l),
            _ => ClauseState::Open,
        }
    }

    /// Propagates from trail position `from`. Returns false on conflict.
    fn propagate(&mut self, mut from: usize) -> bool {
        while from < self.trail.len() {
            let l = self.trail[from];
            from += 1;
            for k in 0..self.occurs[lit_index(-l)].len() {
                let ci = self.occurs[lit_index(-l)][k];
                match self.clause_state(ci) {
                    ClauseState::Conflict => return false,
                    ClauseState::Unit(u) => self.assign(u),
                    _ => {}
                }
            }
        }
        true
    }

    /// Initial pass over every clause (catches unit clauses).
    fn propagate_all(&mut self) -> bool {
        loop {
            let start = self.trail.len();
            for ci in 0..self.f.clauses().len() {
                match self.clause_state(ci) {
                    ClauseState::Conflict => return false,
                    ClauseState::Unit(u) => {
                        self.assign(u);
                        if !self.propagate(self.trail.len() - 1) {
                            return false;
                        }
                    }
                    _ => {}
                }
            }
            if self.trail.len() == start {
                return true;
            }
        }
    }

    fn branch_literal(&self) -> Option<Literal> {
        self.f.clauses().iter().find_map(|c| {
            if c.iter().any(|&l| self.lit_value(l) == 1) {
                return None;
            }
            c.iter().copied().find(|&l| self.lit_value(l) == 0)
        })
    }

    fn model(&self) -> Vec<bool> {
        self.value.iter().map(|&v| v == 1).collect()
    }
}

enum ClauseState {
    Satisfied,
    Open,
    Unit(Literal),
    Conflict,
}

pub fn solve_budgeted(f: &CnfFormula, budget: u64) -> SolveResult {
    let mut s = Solver::new(f);
    let mut decisions = 0u64;
    // (trail length before the decision, decided literal, already flipped)
    let mut stack: Vec<(usize, Literal, bool)> = Vec::new();
    let unsat = |decisions| SolveResult {
        verdict: Verdict::Reject,
        decisions,
        model: None,
    };

    if !s.propagate_all() {
        return unsat(decisions);
    }
    loop {
        let Some(lit) = s.branch_literal() else {
            return SolveResult {
                verdict: Verdict::Accept,
                decisions,
                model: Some(s.model()),
            };
        };
        if decisions == budget {
            return SolveResult {
                verdict: Verdict::Unknown,
                decisions,
                model: None,
            };
        }
        decisions += 1;
        let mark = s.trail.len();
        stack.push((mark, lit, false));
        s.assign(lit);
        let mut ok = s.propagate(mark);
        while !ok {
            // chronological backtracking to the most recent unflipped decision
            loop {
                let Some((mark, lit, flipped)) = stack.pop() else {
                    return unsat(decisions);
                };
                s.undo_to(mark);
                if !flipped {
                    stack.push((mark, -lit, true));
                    s.assign(-lit);
                    ok = s.propagate(mark);
                    break;
                }
            }
        }
    }
}

pub fn sat_decide_budgeted(f: &CnfFormula, budget: u64) -> Verdict {
    solve_budgeted(f, budget).verdict
}

/// Unit propagation alone: answers only when propagation satisfies every
/// clause or hits a conflict.
pub fn unit_propagation_decide(f: &CnfFormula) -> Verdict {
    solve_budgeted(f, 0).verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::cnf::brute_force_sat;

    fn cnf(n: u32, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::new(n, clauses.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn empty_formula_is_satisfiable() {
        assert_eq!(sat_decide_budgeted(&cnf(0, &[]), 0), Verdict::Accept);
        assert_eq!(sat_decide_budgeted(&cnf(3, &[]), 5), Verdict::Accept);
    }

    #[test]
    fn unit_contradiction() {
        assert_eq!(
            sat_decide_budgeted(&cnf(1, &[&[1], &[-1]]), 0),
            Verdict::Reject
        );
    }

    #[test]
    fn needs_decisions() {
        // (a|b) & (-a|b) & (a|-b) & (-a|-b)
        let f = cnf(2, &[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]);
        assert_eq!(sat_decide_budgeted(&f, 0), Verdict::Unknown);
        assert_eq!(sat_decide_budgeted(&f, 1), Verdict::Reject);
        assert!(!brute_force_sat(&f));
    }

    #[test]
    fn model_satisfies() {
        let f = cnf(3, &[&[1, 2], &[-1, 3], &[-3, -2], &[2, 3]]);
        let r = solve_budgeted(&f, 100);
        assert_eq!(r.verdict, Verdict::Accept);
        assert!(f.evaluate(&r.model.unwrap()));
    }
}
