use serde::{Deserialize, Serialize};

use super::search::{c_t, cd_t, ic_t, ComplexityError};
use super::{ComplexityValue, SearchLimits, UniverseSpec};
use crate::bits::BitString;
use crate::machine::Program;
use crate::problems::LanguageOracle;

/// A program as its bit length plus right-padded hex payload.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgramHex {
    pub bits: usize,
    pub hex: String,
}

impl ProgramHex {
    pub fn new(p: &Program) -> Self {
        Self {
            bits: p.len(),
            hex: p.bits().to_hex(),
        }
    }

    pub fn to_program(&self) -> Result<Program, crate::bits::BitsError> {
        BitString::from_hex_with_len(&self.hex, self.bits).map(Program::new)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureEntry {
    /// `None` when censored.
    pub value: Option<usize>,
    pub censored: bool,
    pub lower_bound: usize,
    pub witness: Option<ProgramHex>,
}

impl From<&ComplexityValue> for MeasureEntry {
    fn from(v: &ComplexityValue) -> Self {
        Self {
            value: v.value(),
            censored: v.is_censored(),
            lower_bound: v.lower_bound(),
            witness: v.witness().map(ProgramHex::new),
        }
    }
}

impl MeasureEntry {
    pub fn censored_at(limit: usize) -> Self {
        (&ComplexityValue::AboveLimit { limit }).into()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budgets {
    pub max_program_len: usize,
    pub max_steps: u64,
    /// Quantum margin, present when quantum measures were computed.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumMeasures {
    pub qc: MeasureEntry,
    pub qcd: MeasureEntry,
    pub qic: MeasureEntry,
}

/// One instance, every measure, and the limits they were computed under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub instance_hex: String,
    pub n: usize,
    pub language: String,
    pub universe: UniverseSpec,
    pub budgets: Budgets,
    pub c: MeasureEntry,
    pub cd: MeasureEntry,
    pub ic: MeasureEntry,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub quantum: Option<QuantumMeasures>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta_ic: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ric: Option<f64>,
}

impl ComplexityReport {
    pub fn classical(
        x: &BitString,
        lang: &dyn LanguageOracle,
        limits: &SearchLimits,
    ) -> Result<Self, ComplexityError> {
        // the generator measure has no universe; the empty string has none
        let c = if x.is_empty() {
            MeasureEntry::censored_at(limits.max_program_len)
        } else {
            (&c_t(x, limits)?).into()
        };
        Ok(Self {
            instance_hex: x.to_hex(),
            n: x.len(),
            language: lang.name().to_string(),
            universe: limits.universe,
            budgets: Budgets {
                max_program_len: limits.max_program_len,
                max_steps: limits.step_budget.max_steps,
                epsilon: None,
            },
            c,
            cd: (&cd_t(x, limits)?).into(),
            ic: (&ic_t(x, lang, limits)?).into(),
            quantum: None,
            delta_ic: None,
            ric: None,
        })
    }

    /// Attaches the quantum measures and the derived gap quantities.
    pub fn with_quantum(
        mut self,
        epsilon: f64,
        qc: &ComplexityValue,
        qcd: &ComplexityValue,
        qic: &ComplexityValue,
    ) -> Self {
        self.budgets.epsilon = Some(epsilon);
        if let (Some(ic), Some(q)) = (self.ic.value, qic.value()) {
            self.delta_ic = Some(ic as i64 - q as i64);
            self.ric = (ic > 0).then(|| 1.0 - q as f64 / ic as f64);
        }
        self.quantum = Some(QuantumMeasures {
            qc: qc.into(),
            qcd: qcd.into(),
            qic: qic.into(),
        });
        self
    }

    /// True when no measure produced a value.
    pub fn all_censored(&self) -> bool {
        let mut entries = vec![&self.c, &self.cd, &self.ic];
        if let Some(q) = &self.quantum {
            entries.extend([&q.qc, &q.qcd, &q.qic]);
        }
        entries.iter().all(|e| e.censored)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::problems::Language;

    #[test]
    fn report_round_trips_through_json() {
        let x = bits("01");
        let l = SearchLimits::for_instance(&x, 12, 64);
        let r = ComplexityReport::classical(&x, &Language::Parity, &l).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"instance_hex\":\"4\""));
        let back: ComplexityReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        let w = r.c.witness.as_ref().unwrap().to_program().unwrap();
        assert_eq!(w.len(), r.c.value.unwrap());
    }
}
