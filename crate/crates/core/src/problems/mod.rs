//! Toy languages with exact oracles, plus the budget-limited SAT decider.

pub mod cnf;
pub mod dpll;
pub mod fac;
pub mod generate;
pub mod language;

pub use cnf::{brute_force_sat, emit_dimacs, parse_dimacs, Clause, CnfError, CnfFormula, Literal};
pub use dpll::{sat_decide_budgeted, solve_budgeted, unit_propagation_decide, SolveResult};
pub use fac::{decode_pair, encode_pair, fac_decide, largest_prime_factor, FacError, FacInstance};
pub use language::{Language, LanguageOracle, UnknownLanguage};
