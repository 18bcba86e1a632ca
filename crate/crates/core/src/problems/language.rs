//! Ground-truth languages over bitstrings.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::fac::{decode_pair, fac_decide, FacInstance};
use crate::bits::BitString;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown language {0:?} (expected parity, majority, allones or fac)")]
pub struct UnknownLanguage(pub String);

/// A characteristic function χ_L. `chi` is total on the declared domain and
/// returns `None` outside it.
pub trait LanguageOracle: Send + Sync {
    fn name(&self) -> &str;
    fn chi(&self, x: &BitString) -> Option<bool>;
}

/// The toy languages shipped with the lab.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Language {
    /// Odd number of ones.
    Parity,
    /// Strictly more ones than zeros.
    Majority,
    /// Every bit is one (the empty string included).
    AllOnes,
    /// Pair-encoded factor-prefix instances; undefined on non-encodings.
    Fac,
}

impl Language {
    pub const ALL: [Language; 4] = [
        Language::Parity,
        Language::Majority,
        Language::AllOnes,
        Language::Fac,
    ];
}

impl LanguageOracle for Language {
    fn name(&self) -> &str {
        match self {
            Language::Parity => "parity",
            Language::Majority => "majority",
            Language::AllOnes => "allones",
            Language::Fac => "fac",
        }
    }

    fn chi(&self, x: &BitString) -> Option<bool> {
        match self {
            Language::Parity => Some(x.count_ones() % 2 == 1),
            Language::Majority => Some(2 * x.count_ones() > x.len()),
            Language::AllOnes => Some(x.count_ones() == x.len()),
            Language::Fac => {
                let (x, a) = decode_pair(x).ok()?;
                let z = FacInstance::new(x, a).ok()?;
                fac_decide(&z).ok()
            }
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Language {
    type Err = UnknownLanguage;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Language::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownLanguage(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::problems::fac::encode_pair;

    #[test]
    fn parity_and_friends() {
        assert_eq!(Language::Parity.chi(&bits("1011")), Some(true));
        assert_eq!(Language::Parity.chi(&bits("")), Some(false));
        assert_eq!(Language::Majority.chi(&bits("110")), Some(true));
        assert_eq!(Language::Majority.chi(&bits("10")), Some(false));
        assert_eq!(Language::AllOnes.chi(&bits("")), Some(true));
    }

    #[test]
    fn fac_on_encodings() {
        assert_eq!(Language::Fac.chi(&encode_pair(15, &bits("10"))), Some(true));
        assert_eq!(
            Language::Fac.chi(&encode_pair(15, &bits("11"))),
            Some(false)
        );
        assert_eq!(Language::Fac.chi(&bits("0")), None);
    }

    #[test]
    fn names_parse_back() {
        for l in Language::ALL {
            assert_eq!(l.name().parse::<Language>().unwrap(), l);
        }
        assert!("sat".parse::<Language>().is_err());
    }
}
