//! Queasiness quantities: the instance-complexity gap `Δic = ic − qic`, its
//! normalised form `Ric = 1 − qic/ic`, a four-way classification, proxy
//! estimators and the landscape table.

pub mod compress;
mod landscape;
pub mod proxy;
mod utility;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexity::ComplexityValue;

pub use compress::{compress, compressor_cd_proxy, decompress, CompressError, CompressorConfig};
pub use landscape::{
    landscape, write_csv, LandscapeConfig, LandscapeError, LandscapeInstance, CSV_COLUMNS,
};
pub use proxy::{
    solver_ic_proxy, PortfolioMember, ProxyConfig, ProxyError, SolverKind, ValidatedPortfolio,
};
pub use utility::{spearman, utility_points, UtilityPoint};

/// A measured length in bits, or censored above a limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Measured {
    Value(usize),
    AboveLimit(usize),
}

impl Measured {
    pub fn value(self) -> Option<usize> {
        match self {
            Measured::Value(v) => Some(v),
            Measured::AboveLimit(_) => None,
        }
    }

    pub fn lower_bound(self) -> usize {
        match self {
            Measured::Value(v) => v,
            Measured::AboveLimit(l) => l + 1,
        }
    }

    pub fn is_censored(self) -> bool {
        matches!(self, Measured::AboveLimit(_))
    }
}

impl From<&ComplexityValue> for Measured {
    fn from(v: &ComplexityValue) -> Self {
        match v {
            ComplexityValue::Exact { bits, .. } => Measured::Value(*bits),
            ComplexityValue::AboveLimit { limit } => Measured::AboveLimit(*limit),
        }
    }
}

impl fmt::Display for Measured {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measured::Value(v) => write!(f, "{v}"),
            Measured::AboveLimit(l) => write!(f, ">{l}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Proxy,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Proxy => "proxy",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QueasyClass {
    Easy,
    Queasy,
    Hard,
    Indeterminate,
}

impl fmt::Display for QueasyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QueasyClass::Easy => "easy",
            QueasyClass::Queasy => "queasy",
            QueasyClass::Hard => "hard",
            QueasyClass::Indeterminate => "indeterminate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("ric needs ic >= 1")]
    ZeroIc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ric {
    pub raw: f64,
    /// `raw` forced into `[0, 1)`.
    pub clamped: f64,
    /// Set when `raw` fell outside `[0, 1)`.
    pub anomaly: bool,
}

/// `ic − qic`; censored when either side is.
pub fn delta_ic(ic: Measured, qic: Measured) -> Option<i64> {
    Some(ic.value()? as i64 - qic.value()? as i64)
}

/// `1 − qic/ic`, raw and clamped.
pub fn ric(ic: usize, qic: usize) -> Result<Ric, MetricsError> {
    if ic == 0 {
        return Err(MetricsError::ZeroIc);
    }
    let raw = 1.0 - qic as f64 / ic as f64;
    let below_one = 1.0 - f64::EPSILON / 2.0;
    let clamped = raw.clamp(0.0, below_one);
    Ok(Ric {
        raw,
        clamped,
        anomaly: clamped != raw,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueasinessRecord {
    pub instance_id: String,
    pub language: String,
    pub mode: Mode,
    pub n: usize,
    pub ic: Measured,
    pub qic: Measured,
    pub cd: Measured,
    /// Absent when the mode does not estimate it.
    pub c: Option<Measured>,
    pub seed: u64,
    /// Classical and quantum limits, as `key=value` pairs.
    pub budgets: String,
    /// Set when a measure could not be computed at all.
    pub failure: Option<String>,
}

impl QueasinessRecord {
    pub fn delta_ic(&self) -> Option<i64> {
        delta_ic(self.ic, self.qic)
    }

    pub fn ric(&self) -> Option<Ric> {
        ric(self.ic.value()?, self.qic.value()?).ok()
    }

    /// Names of the censored measures.
    pub fn censored(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (name, m) in [
            ("ic", Some(self.ic)),
            ("qic", Some(self.qic)),
            ("cd", Some(self.cd)),
            ("c", self.c),
        ] {
            if m.is_some_and(Measured::is_censored) {
                out.push(name);
            }
        }
        out
    }
}

/// Classification with a margin in bits, tried in order:
///
/// 1. ic or qic censored: indeterminate;
/// 2. `qic + margin < ic`: queasy;
/// 3. both at most `margin`: easy;
/// 4. `cd − ic ≤ margin`: hard (a censored cd counts as its lower bound,
///    and stays indeterminate if that bound is not enough);
/// 5. otherwise easy.
pub fn classify_queasy(record: &QueasinessRecord, margin: usize) -> QueasyClass {
    let (Some(ic), Some(qic)) = (record.ic.value(), record.qic.value()) else {
        return QueasyClass::Indeterminate;
    };
    if qic + margin < ic {
        return QueasyClass::Queasy;
    }
    if ic <= margin && qic <= margin {
        return QueasyClass::Easy;
    }
    let gap = record.cd.lower_bound() as i64 - ic as i64;
    match record.cd {
        Measured::Value(_) if gap <= margin as i64 => QueasyClass::Hard,
        Measured::AboveLimit(_) if gap <= margin as i64 => QueasyClass::Indeterminate,
        _ => QueasyClass::Easy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn record(ic: Measured, qic: Measured, cd: Measured) -> QueasinessRecord {
        QueasinessRecord {
            instance_id: "t".into(),
            language: "parity".into(),
            mode: Mode::Exact,
            n: 1,
            ic,
            qic,
            cd,
            c: None,
            seed: 0,
            budgets: String::new(),
            failure: None,
        }
    }

    #[test]
    fn definition_examples() {
        use Measured::Value as V;
        assert_eq!(delta_ic(V(7), V(7)), Some(0));
        assert_eq!(delta_ic(V(10), V(2)), Some(8));
        assert_eq!(delta_ic(V(10), Measured::AboveLimit(16)), None);
        assert_eq!(ric(7, 7).unwrap().raw, 0.0);
        assert_eq!(ric(10, 2).unwrap().raw, 0.8);
        assert_eq!(ric(0, 2), Err(MetricsError::ZeroIc));
        let big = ric(1 << 20, 3).unwrap();
        assert!(big.raw > 0.99999 && big.raw < 1.0 && !big.anomaly);
    }

    #[test]
    fn negative_ric_is_flagged() {
        let r = ric(5, 7).unwrap();
        assert!(r.raw < 0.0);
        assert_eq!(r.clamped, 0.0);
        assert!(r.anomaly);
        let r = ric(5, 0).unwrap();
        assert!(r.anomaly && r.clamped < 1.0);
    }

    #[test]
    fn classification_examples() {
        use Measured::{AboveLimit as A, Value as V};
        assert_eq!(
            classify_queasy(&record(V(12), V(2), V(14)), 4),
            QueasyClass::Queasy
        );
        assert_eq!(
            classify_queasy(&record(V(3), V(3), A(16)), 4),
            QueasyClass::Easy
        );
        assert_eq!(
            classify_queasy(&record(A(16), V(3), V(5)), 4),
            QueasyClass::Indeterminate
        );
        assert_eq!(
            classify_queasy(&record(V(7), V(15), V(7)), 4),
            QueasyClass::Hard
        );
        assert_eq!(
            classify_queasy(&record(V(8), V(10), V(30)), 4),
            QueasyClass::Easy
        );
        assert_eq!(
            classify_queasy(&record(V(8), V(10), A(10)), 4),
            QueasyClass::Indeterminate
        );
        assert_eq!(
            classify_queasy(&record(V(8), V(10), A(20)), 4),
            QueasyClass::Easy
        );
    }

    #[test]
    fn censored_names() {
        use Measured::{AboveLimit as A, Value as V};
        let mut r = record(V(5), A(16), V(5));
        r.c = Some(A(16));
        assert_eq!(r.censored(), vec!["qic", "c"]);
    }

    fn measured() -> impl Strategy<Value = Measured> {
        prop_oneof![
            (0usize..40).prop_map(Measured::Value),
            (0usize..40).prop_map(Measured::AboveLimit),
        ]
    }

    proptest! {
        /// Shifting ic, qic and cd together leaves the class alone once both
        /// ic and qic already exceed the margin.
        #[test]
        fn class_is_shift_invariant(ic in measured(), qic in measured(), cd in measured(), shift in 0usize..20, margin in 0usize..8) {
            let small = |m: Measured| m.value().is_some_and(|v| v <= margin);
            prop_assume!(!small(ic) && !small(qic));
            let up = |m: Measured| match m {
                Measured::Value(v) => Measured::Value(v + shift),
                Measured::AboveLimit(l) => Measured::AboveLimit(l + shift),
            };
            prop_assert_eq!(
                classify_queasy(&record(ic, qic, cd), margin),
                classify_queasy(&record(up(ic), up(qic), up(cd)), margin)
            );
        }
    }
}
