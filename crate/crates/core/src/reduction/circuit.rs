//! Gate-to-clause translation with constant folding.

use crate::problems::{Clause, Literal};

/// A wire: a constant or a (possibly negated) variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wire {
    Const(bool),
    Lit(Literal),
}

impl Wire {
    pub fn not(self) -> Wire {
        match self {
            Wire::Const(b) => Wire::Const(!b),
            Wire::Lit(l) => Wire::Lit(-l),
        }
    }
}

/// Accumulates variables and clauses in emission order.
#[derive(Debug, Clone, Default)]
pub struct ClauseBuilder {
    next_var: u32,
    pub clauses: Vec<Clause>,
}

impl ClauseBuilder {
    pub fn new(first_free_var: u32) -> Self {
        Self {
            next_var: first_free_var,
            clauses: Vec::new(),
        }
    }

    pub fn fresh(&mut self) -> Literal {
        let v = self.next_var as Literal;
        self.next_var += 1;
        v
    }

    pub fn variable_count(&self) -> u32 {
        self.next_var - 1
    }

    pub fn clause(&mut self, c: Clause) {
        self.clauses.push(c);
    }

    /// Forces `w` to `value`. A constant that disagrees yields a fresh
    /// contradictory pair, since empty clauses are not allowed.
    pub fn force(&mut self, w: Wire, value: bool) {
        match w {
            Wire::Const(b) if b == value => {}
            Wire::Const(_) => {
                let v = self.fresh();
                self.clause(vec![v]);
                self.clause(vec![-v]);
            }
            Wire::Lit(l) => self.clause(vec![if value { l } else { -l }]),
        }
    }

    pub fn and(&mut self, a: Wire, b: Wire) -> Wire {
        match (a, b) {
            (Wire::Const(false), _) | (_, Wire::Const(false)) => Wire::Const(false),
            (Wire::Const(true), w) | (w, Wire::Const(true)) => w,
            (Wire::Lit(a), Wire::Lit(b)) => {
                let c = self.fresh();
                self.clause(vec![a, -c]);
                self.clause(vec![b, -c]);
                self.clause(vec![c, -a, -b]);
                Wire::Lit(c)
            }
        }
    }

    pub fn xor(&mut self, a: Wire, b: Wire) -> Wire {
        match (a, b) {
            (Wire::Const(k), w) | (w, Wire::Const(k)) => {
                if k {
                    w.not()
                } else {
                    w
                }
            }
            (Wire::Lit(a), Wire::Lit(b)) => {
                let c = self.fresh();
                self.clause(vec![-a, -b, -c]);
                self.clause(vec![a, b, -c]);
                self.clause(vec![a, -b, c]);
                self.clause(vec![-a, b, c]);
                Wire::Lit(c)
            }
        }
    }

    /// `(sum, carry)` of three bits.
    pub fn full_add(&mut self, a: Wire, b: Wire, cin: Wire) -> (Wire, Wire) {
        let lits = match (a, b, cin) {
            (Wire::Lit(a), Wire::Lit(b), Wire::Lit(c)) => (a, b, c),
            _ => {
                // at least one constant: fold to a half adder
                let (x, y, k) = match (a, b, cin) {
                    (Wire::Const(k), x, y) | (x, Wire::Const(k), y) | (x, y, Wire::Const(k)) => {
                        (x, y, k)
                    }
                    _ => unreachable!(),
                };
                return if k {
                    // x + y + 1: sum = xnor, carry = or
                    let s = self.xor(x, y).not();
                    let c = self.and(x.not(), y.not()).not();
                    (s, c)
                } else {
                    (self.xor(x, y), self.and(x, y))
                };
            }
        };
        let (a, b, c) = lits;
        let s = self.fresh();
        for mask in 0..8u8 {
            let sa = if mask & 1 != 0 { a } else { -a };
            let sb = if mask & 2 != 0 { b } else { -b };
            let sc = if mask & 4 != 0 { c } else { -c };
            // the clause covers the assignment that falsifies sa, sb and sc,
            // which has 3 - popcount(mask) true inputs
            let sum_odd = mask.count_ones() % 2 == 0;
            self.clause(vec![sa, sb, sc, if sum_odd { s } else { -s }]);
        }
        let carry = self.fresh();
        self.clause(vec![-a, -b, carry]);
        self.clause(vec![-a, -c, carry]);
        self.clause(vec![-b, -c, carry]);
        self.clause(vec![a, b, -carry]);
        self.clause(vec![a, c, -carry]);
        self.clause(vec![b, c, -carry]);
        (Wire::Lit(s), Wire::Lit(carry))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::CnfFormula;

    /// All assignments of the inputs, with auxiliaries found by brute force.
    fn check_gate(
        arity: usize,
        build: impl Fn(&mut ClauseBuilder, &[Wire]) -> Vec<Wire>,
        truth: impl Fn(&[bool]) -> Vec<bool>,
    ) {
        for bits in 0..(1u32 << arity) {
            let inputs: Vec<bool> = (0..arity).map(|i| bits >> i & 1 == 1).collect();
            let mut b = ClauseBuilder::new(arity as u32 + 1);
            let wires: Vec<Wire> = (1..=arity as i32).map(Wire::Lit).collect();
            let outs = build(&mut b, &wires);
            for (i, &v) in inputs.iter().enumerate() {
                b.force(wires[i], v);
            }
            for (w, v) in outs.iter().zip(truth(&inputs)) {
                b.force(*w, v);
            }
            let f = CnfFormula::new(b.variable_count(), b.clauses.clone()).unwrap();
            assert!(crate::problems::brute_force_sat(&f), "{inputs:?}");
            // and the opposite output value is refuted
            let mut b2 = ClauseBuilder::new(arity as u32 + 1);
            let outs = build(&mut b2, &wires);
            for (i, &v) in inputs.iter().enumerate() {
                b2.force(wires[i], v);
            }
            b2.force(outs[0], !truth(&inputs)[0]);
            let f = CnfFormula::new(b2.variable_count(), b2.clauses.clone()).unwrap();
            assert!(!crate::problems::brute_force_sat(&f), "{inputs:?}");
        }
    }

    #[test]
    fn gates_match_truth_tables() {
        check_gate(2, |b, w| vec![b.and(w[0], w[1])], |x| vec![x[0] && x[1]]);
        check_gate(2, |b, w| vec![b.xor(w[0], w[1])], |x| vec![x[0] ^ x[1]]);
        let add = |x: &[bool]| {
            let n = x.iter().filter(|&&b| b).count();
            vec![n % 2 == 1, n >= 2]
        };
        check_gate(
            3,
            |b, w| {
                let (s, c) = b.full_add(w[0], w[1], w[2]);
                vec![s, c]
            },
            add,
        );
        check_gate(
            3,
            |b, w| {
                let (s, c) = b.full_add(w[0], w[1], w[2]);
                vec![c, s]
            },
            |x| {
                let n = x.iter().filter(|&&b| b).count();
                vec![n >= 2, n % 2 == 1]
            },
        );
        for k in [false, true] {
            check_gate(
                2,
                |b, w| {
                    let (s, c) = b.full_add(w[0], Wire::Const(k), w[1]);
                    vec![s, c]
                },
                |x| {
                    let n = x.iter().filter(|&&b| b).count() + k as usize;
                    vec![n % 2 == 1, n >= 2]
                },
            );
            check_gate(
                2,
                |b, w| {
                    let (s, c) = b.full_add(w[0], Wire::Const(k), w[1]);
                    vec![c, s]
                },
                |x| {
                    let n = x.iter().filter(|&&b| b).count() + k as usize;
                    vec![n >= 2, n % 2 == 1]
                },
            );
        }
    }

    #[test]
    fn constants_fold_without_clauses() {
        let mut b = ClauseBuilder::new(2);
        let x = Wire::Lit(1);
        assert_eq!(b.and(x, Wire::Const(true)), x);
        assert_eq!(b.and(x, Wire::Const(false)), Wire::Const(false));
        assert_eq!(b.xor(x, Wire::Const(true)), Wire::Lit(-1));
        assert!(b.clauses.is_empty());
        b.force(Wire::Const(true), false);
        assert_eq!(b.clauses, vec![vec![2], vec![-2]]);
    }
}
