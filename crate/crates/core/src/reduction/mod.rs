//! An invertible reduction from factor-prefix instances to SAT.
//!
//! `reduce_to_sat(x:a)` is satisfiable iff `x` has a factor `p` with
//! `2 <= p < x` whose minimal binary form starts with `a`. Note this is any
//! nontrivial factor, not only the largest prime one: for `x = 15, a = 11`
//! the factor 3 satisfies it although `fac_decide` rejects.
//!
//! Variable layout, in DIMACS numbering:
//!
//! ```text
//! 1 ..= T             tag: T = |encode_pair(x, a)|
//! T+1 ..= T+w         p, least significant bit first
//! T+w+1 ..= T+2w      q, least significant bit first
//! T+2w+1 ..           auxiliary gate outputs and selectors
//! ```
//!
//! with `w = bitlen(x) - 1`. Clause order:
//!
//! 1. the tag block: clause `i` (1-based) is the unit clause `i` or `-i`,
//!    spelling `encode_pair(x, a)` with positive meaning 1;
//! 2. unit clauses fixing the product bits to `x`;
//! 3. the array multiplier: partial products by anti-diagonal, then one
//!    ripple-carry row per bit of `p`;
//! 4. `p >= 2` and `q >= 2`;
//! 5. the leading-one selector of `p` and the prefix clauses.
//!
//! The tag block is the longest run of leading clauses of that unit shape.
//! The first product clause never continues it, so a third-party tool can
//! recover `T` from plain DIMACS and decode the tag bits.

mod circuit;

use serde::Serialize;
use thiserror::Error;

pub use circuit::{ClauseBuilder, Wire};

use crate::bits::BitString;
use crate::problems::{
    decode_pair, encode_pair, solve_budgeted, CnfError, CnfFormula, FacError, FacInstance, Literal,
};
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("x = {0} has no nontrivial factors to encode; need x >= 4")]
    TooSmall(u64),
    #[error("formula has no tag block")]
    MissingTag,
    #[error("tag block does not decode: {0}")]
    CorruptTag(FacError),
    #[error("formula is not the reduction of {0}")]
    NotInImage(FacInstance),
    #[error(transparent)]
    Cnf(#[from] CnfError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionArtifact {
    pub formula: CnfFormula,
    pub source: FacInstance,
    /// Width of both multiplicands.
    pub width: usize,
    pub tag_len: usize,
}

impl ReductionArtifact {
    fn p_var(&self, i: usize) -> usize {
        self.tag_len + i + 1
    }

    /// `(p, q)` read off a satisfying assignment.
    pub fn factors_from_model(&self, model: &[bool]) -> (u64, u64) {
        let read = |base: usize| {
            (0..self.width).fold(0u64, |acc, i| acc | (model[base + i - 1] as u64) << i)
        };
        (read(self.p_var(0)), read(self.p_var(self.width)))
    }
}

fn bit_length(x: u64) -> usize {
    (u64::BITS - x.leading_zeros()) as usize
}

pub fn reduce_to_sat(z: &FacInstance) -> Result<ReductionArtifact, ReductionError> {
    let x = z.x;
    if x < 4 {
        return Err(ReductionError::TooSmall(x));
    }
    let tag = encode_pair(x, &z.a);
    let t = tag.len();
    let w = bit_length(x) - 1;
    let p: Vec<Wire> = (0..w).map(|i| Wire::Lit((t + 1 + i) as Literal)).collect();
    let q: Vec<Wire> = (0..w)
        .map(|i| Wire::Lit((t + w + 1 + i) as Literal))
        .collect();
    let mut b = ClauseBuilder::new((t + 2 * w + 1) as u32);

    for (i, bit) in tag.iter().enumerate() {
        let v = (i + 1) as Literal;
        b.clause(vec![if bit { v } else { -v }]);
    }
    let tag_clauses = std::mem::take(&mut b.clauses);

    // partial products by anti-diagonal so the solver branches low bits first
    let mut pp = vec![vec![Wire::Const(false); w]; w];
    for d in 0..2 * w - 1 {
        for i in d.saturating_sub(w - 1)..=d.min(w - 1) {
            pp[i][d - i] = b.and(p[i], q[d - i]);
        }
    }
    let width = 2 * w;
    let mut acc = vec![Wire::Const(false); width];
    for (i, row) in pp.iter().enumerate() {
        let mut carry = Wire::Const(false);
        for k in i..width {
            let addend = row.get(k - i).copied().unwrap_or(Wire::Const(false));
            let (s, c) = b.full_add(acc[k], addend, carry);
            acc[k] = s;
            carry = c;
        }
    }
    let multiplier = std::mem::take(&mut b.clauses);
    for (k, &bit) in acc.iter().enumerate() {
        b.force(bit, (x >> k) & 1 == 1);
    }
    let product = std::mem::take(&mut b.clauses);

    // p >= 2 and q >= 2
    b.clause(p[1..].iter().map(|w| lit(*w)).collect());
    b.clause(q[1..].iter().map(|w| lit(*w)).collect());

    // lead[j]: bit j of p is its leading one; clear[j]: bits above j are 0
    let a: Vec<bool> = z.a.iter().collect();
    let mut clear: Vec<Option<Literal>> = vec![None; w];
    for j in (0..w - 1).rev() {
        let c = b.fresh();
        b.clause(vec![-c, -lit(p[j + 1])]);
        if let Some(above) = clear[j + 1] {
            b.clause(vec![-c, above]);
        }
        clear[j] = Some(c);
    }
    let lead: Vec<Literal> = (0..w).map(|_| b.fresh()).collect();
    b.clause(lead.clone());
    for j in 0..w {
        b.clause(vec![-lead[j], lit(p[j])]);
        if let Some(c) = clear[j] {
            b.clause(vec![-lead[j], c]);
        }
        if j + 1 < a.len() {
            b.clause(vec![-lead[j]]);
            continue;
        }
        for (k, &bit) in a.iter().enumerate() {
            let pv = lit(p[j - k]);
            b.clause(vec![-lead[j], if bit { pv } else { -pv }]);
        }
    }

    let mut ordered = tag_clauses;
    ordered.extend(product);
    ordered.extend(multiplier);
    ordered.append(&mut b.clauses);
    let formula = CnfFormula::new(b.variable_count(), ordered)?.with_tag_len(t);
    debug_assert_eq!(scan_tag_len(&formula), t);
    Ok(ReductionArtifact {
        formula,
        source: z.clone(),
        width: w,
        tag_len: t,
    })
}

fn lit(w: Wire) -> Literal {
    match w {
        Wire::Lit(l) => l,
        Wire::Const(_) => unreachable!("multiplicand bits are variables"),
    }
}

/// Length of the leading run of clauses `[±1], [±2], …`.
fn scan_tag_len(f: &CnfFormula) -> usize {
    f.clauses()
        .iter()
        .enumerate()
        .take_while(|(i, c)| c.len() == 1 && c[0].unsigned_abs() as usize == i + 1)
        .count()
}

/// The tag bits of a formula, from its annotation or by scanning.
pub fn tag_bits(f: &CnfFormula) -> BitString {
    let t = if f.tag_len() > 0 {
        f.tag_len()
    } else {
        scan_tag_len(f)
    };
    f.clauses()[..t].iter().map(|c| c[0] > 0).collect()
}

/// Recovers the source instance and checks the formula is exactly its image.
pub fn invert_reduction(f: &CnfFormula) -> Result<FacInstance, ReductionError> {
    let tag = tag_bits(f);
    if tag.is_empty() {
        return Err(ReductionError::MissingTag);
    }
    let (x, a) = decode_pair(&tag).map_err(ReductionError::CorruptTag)?;
    let z = FacInstance::new(x, a).map_err(ReductionError::CorruptTag)?;
    match reduce_to_sat(&z) {
        Ok(r) if r.formula.same_clauses(f) => Ok(z),
        _ => Err(ReductionError::NotInImage(z)),
    }
}

/// Ground truth for the relaxed language.
pub fn factor_prefix_oracle(z: &FacInstance) -> bool {
    (2..z.x)
        .filter(|p| z.x % p == 0)
        .any(|p| BitString::minimal_binary(p).starts_with(&z.a))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionCheck {
    pub instance: String,
    pub satisfiable: bool,
    pub oracle: bool,
    /// A satisfying assignment, when found, multiplies out to `x` with the prefix.
    pub certificate_ok: bool,
    pub round_trip: bool,
    pub variables: u32,
    pub clauses: usize,
    pub tag_len: usize,
    pub decisions: u64,
}

impl ReductionCheck {
    pub fn matches(&self) -> bool {
        self.satisfiable == self.oracle && self.certificate_ok && self.round_trip
    }
}

pub fn verify_reduction(z: &FacInstance) -> Result<ReductionCheck, ReductionError> {
    let r = reduce_to_sat(z)?;
    let res = solve_budgeted(&r.formula, u64::MAX);
    let satisfiable = res.verdict == Verdict::Accept;
    let certificate_ok = match &res.model {
        Some(m) => {
            let (p, q) = r.factors_from_model(m);
            p >= 2
                && q >= 2
                && p.checked_mul(q) == Some(z.x)
                && BitString::minimal_binary(p).starts_with(&z.a)
        }
        None => true,
    };
    Ok(ReductionCheck {
        instance: z.to_string(),
        satisfiable,
        oracle: factor_prefix_oracle(z),
        certificate_ok,
        round_trip: invert_reduction(&r.formula).as_ref() == Ok(z),
        variables: r.formula.variable_count(),
        clauses: r.formula.clauses().len(),
        tag_len: r.tag_len,
        decisions: res.decisions,
    })
}

/// Clause count of the reduction for a representative `x` of each
/// multiplicand width, with the least-squares slope of log clauses against
/// log width.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeFit {
    pub points: Vec<(usize, usize)>,
    pub exponent: f64,
}

pub fn clause_growth(widths: std::ops::RangeInclusive<usize>) -> Result<SizeFit, ReductionError> {
    let mut points = Vec::new();
    for w in widths {
        // odd x with bit length w + 1
        let x = (1u64 << w) | 1;
        let z = FacInstance::new(x, BitString::new()).expect("x below the domain cap");
        let r = reduce_to_sat(&z)?;
        points.push((w, r.formula.clauses().len() - r.tag_len));
    }
    let xs: Vec<f64> = points.iter().map(|&(w, _)| (w as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, c)| (c as f64).ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(SizeFit {
        points,
        exponent: sxy / sxx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::problems::{brute_force_sat, emit_dimacs, parse_dimacs};

    fn z(x: u64, a: &str) -> FacInstance {
        FacInstance::new(x, bits(a)).unwrap()
    }

    fn sat(x: u64, a: &str) -> bool {
        solve_budgeted(&reduce_to_sat(&z(x, a)).unwrap().formula, u64::MAX).verdict
            == Verdict::Accept
    }

    #[test]
    fn worked_instances() {
        assert!(sat(15, "10"));
        assert!(!sat(9, "10"));
        assert!(sat(15, "11"));
        assert!(sat(4, "1"));
        assert!(!sat(7, ""));
        assert!(!sat(15, "0"));
    }

    #[test]
    fn smallest_instance_matches_brute_force() {
        // x = 4: two 2-bit multiplicands, small enough for full enumeration
        for a in ["", "1", "10", "11", "0"] {
            let f = reduce_to_sat(&z(4, a)).unwrap().formula;
            assert_eq!(brute_force_sat(&f), factor_prefix_oracle(&z(4, a)), "{a}");
        }
    }

    #[test]
    fn too_small_is_an_error() {
        assert_eq!(
            reduce_to_sat(&z(3, "1")).unwrap_err(),
            ReductionError::TooSmall(3)
        );
    }

    #[test]
    fn inversion_survives_dimacs() {
        let r = reduce_to_sat(&z(15, "10")).unwrap();
        let parsed = parse_dimacs(&emit_dimacs(&r.formula)).unwrap();
        assert_eq!(parsed.tag_len(), 0);
        assert_eq!(invert_reduction(&parsed).unwrap(), z(15, "10"));
    }

    #[test]
    fn foreign_formulas_are_rejected() {
        let plain = CnfFormula::new(2, vec![vec![1, 2], vec![-1]]).unwrap();
        assert_eq!(invert_reduction(&plain), Err(ReductionError::MissingTag));
        let r = reduce_to_sat(&z(21, "1")).unwrap();
        let mut clauses = r.formula.clauses().to_vec();
        clauses.pop();
        let trimmed = CnfFormula::new(r.formula.variable_count(), clauses).unwrap();
        assert_eq!(
            invert_reduction(&trimmed),
            Err(ReductionError::NotInImage(z(21, "1")))
        );
    }

    #[test]
    fn tag_block_is_disjoint_and_injective() {
        let mut seen = std::collections::HashSet::new();
        for x in 4..64u64 {
            for a in ["", "0", "1", "10", "111"] {
                let r = reduce_to_sat(&z(x, a)).unwrap();
                let t = r.tag_len as u32;
                assert!(r.formula.clauses()[t as usize..]
                    .iter()
                    .flatten()
                    .all(|l| l.unsigned_abs() > t));
                assert!(seen.insert(emit_dimacs(&r.formula)));
            }
        }
    }

    #[test]
    fn check_report() {
        let c = verify_reduction(&z(35, "101")).unwrap();
        assert!(c.satisfiable && c.oracle && c.matches());
        let c = verify_reduction(&z(13, "")).unwrap();
        assert!(!c.satisfiable && c.matches());
    }
}
