//! Distinguishing-versus-instance gap against utility-set size.

use serde::Serialize;

use crate::bits::BitString;
use crate::complexity::{utility_set, AcceptorTable, ComplexityError, SearchLimits, UniverseSpec};
use crate::problems::LanguageOracle;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UtilityPoint {
    pub language: String,
    pub x: BitString,
    pub cd: usize,
    pub ic: usize,
    /// `cd − ic`.
    pub d: i64,
    /// Members decided by the shortest consistent program for `x`.
    pub utility: usize,
}

impl UtilityPoint {
    pub fn log2_utility(&self) -> f64 {
        (self.utility as f64).log2()
    }
}

/// One point per `n`-bit string with both measures exact.
pub fn utility_points(
    lang: &dyn LanguageOracle,
    n: usize,
    max_program_len: usize,
    max_steps: u64,
) -> Result<Vec<UtilityPoint>, ComplexityError> {
    let limits = SearchLimits::new(max_program_len, max_steps, UniverseSpec::SameLength(n));
    let table = AcceptorTable::build(lang, &limits)?;
    let mut out = Vec::new();
    for x in BitString::all_of_length(n) {
        let (Some(cd), Some(ic)) = (table.cd_value(&x), table.ic_value(&x)) else {
            continue;
        };
        let (Some(cdv), Some(w)) = (cd.value(), ic.witness()) else {
            continue;
        };
        let icv = w.len();
        out.push(UtilityPoint {
            language: lang.name().to_string(),
            x,
            cd: cdv,
            ic: icv,
            d: cdv as i64 - icv as i64,
            utility: utility_set(w, lang, &limits)?.count,
        });
    }
    Ok(out)
}

/// Ranks from 1, ties sharing their average rank.
fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation; `None` for mismatched lengths, fewer than two
/// points, or a constant side.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let mean = (x.len() as f64 + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mean) * (b - mean);
        sxx += (a - mean) * (a - mean);
        syy += (b - mean) * (b - mean);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::Language;

    #[test]
    fn spearman_reference_values() {
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]), Some(1.0));
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), Some(-1.0));
        assert_eq!(spearman(&[1.0, 1.0], &[1.0, 2.0]), None);
        // ties: scipy.stats.spearmanr([1,2,2,3],[1,3,2,4]) = 0.9486832980505138
        let r = spearman(&[1.0, 2.0, 2.0, 3.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((r - 0.9486832980505138).abs() < 1e-12);
        assert_eq!(ranks(&[5.0, 1.0, 5.0]), vec![2.5, 1.0, 2.5]);
    }

    #[test]
    fn allones_utility_grows_with_the_gap() {
        let pts = utility_points(&Language::AllOnes, 4, 14, 256).unwrap();
        assert_eq!(pts.len(), 16);
        let all = pts.iter().find(|p| p.x.count_ones() == 4).unwrap();
        assert_eq!((all.cd, all.ic), (8, 8));
        let zeros = pts.iter().find(|p| p.x.count_ones() == 0).unwrap();
        assert_eq!((zeros.d, zeros.utility), (3, 8));
        let (d, u): (Vec<f64>, Vec<f64>) =
            pts.iter().map(|p| (p.d as f64, p.log2_utility())).unzip();
        assert!(spearman(&d, &u).unwrap() > 0.0);
    }
}
