//! Seeded random CNF instances.

use rand::seq::SliceRandom;
use rand::Rng;

use super::cnf::CnfFormula;

/// Uniform random k-CNF: each clause picks `k` distinct variables and random
/// polarities.
pub fn random_kcnf<R: Rng>(rng: &mut R, vars: u32, clauses: usize, k: usize) -> CnfFormula {
    assert!(k as u32 <= vars, "k = {k} exceeds {vars} variables");
    let pool: Vec<i32> = (1..=vars as i32).collect();
    let cls = (0..clauses)
        .map(|_| {
            pool.choose_multiple(rng, k)
                .map(|&v| if rng.gen_bool(0.5) { v } else { -v })
                .collect()
        })
        .collect();
    CnfFormula::new(vars, cls).expect("generated literals are in range")
}

/// Random 3-CNF at a clause-to-variable ratio.
pub fn random_3cnf_at_ratio<R: Rng>(rng: &mut R, vars: u32, ratio: f64) -> CnfFormula {
    let clauses = (vars as f64 * ratio).round() as usize;
    random_kcnf(rng, vars, clauses, 3)
}

/// Mixed-width random CNF (widths 1..=max_width) for solver fuzzing.
pub fn random_mixed_cnf<R: Rng>(
    rng: &mut R,
    vars: u32,
    clauses: usize,
    max_width: usize,
) -> CnfFormula {
    let pool: Vec<i32> = (1..=vars as i32).collect();
    let cls = (0..clauses)
        .map(|_| {
            let w = rng.gen_range(1..=max_width.min(vars as usize));
            pool.choose_multiple(rng, w)
                .map(|&v| if rng.gen_bool(0.5) { v } else { -v })
                .collect()
        })
        .collect();
    CnfFormula::new(vars, cls).expect("generated literals are in range")
}
