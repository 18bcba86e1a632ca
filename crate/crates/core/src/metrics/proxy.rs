//! Instance-complexity proxy for SAT: the shortest declared description among
//! a fixed solver portfolio that decides the formula.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::compress::CompressorConfig;
use super::Measured;
use crate::problems::generate::random_mixed_cnf;
use crate::problems::{brute_force_sat, sat_decide_budgeted, unit_propagation_decide, CnfFormula};
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolverKind {
    UnitPropagation,
    Dpll {
        budget: u64,
    },
    /// Answers the same on every formula. Only useful as a sanity probe.
    Constant {
        answer: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortfolioMember {
    pub id: String,
    pub description_length: usize,
    pub solver: SolverKind,
}

impl PortfolioMember {
    pub fn decide(&self, f: &CnfFormula) -> Verdict {
        match self.solver {
            SolverKind::UnitPropagation => unit_propagation_decide(f),
            SolverKind::Dpll { budget } => sat_decide_budgeted(f, budget),
            SolverKind::Constant { answer } => Verdict::from_bool(answer),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProxyConfig {
    pub compressor: CompressorConfig,
    pub portfolio: Vec<PortfolioMember>,
    /// Seed of the validation formulas every member is checked on.
    pub validation_seed: u64,
    pub validation_size: usize,
}

impl Default for ProxyConfig {
    fn default() -> Self {
        Self {
            compressor: CompressorConfig::default(),
            portfolio: vec![
                PortfolioMember {
                    id: "unit-propagation".into(),
                    description_length: 8,
                    solver: SolverKind::UnitPropagation,
                },
                PortfolioMember {
                    id: "dpll".into(),
                    description_length: 20,
                    solver: SolverKind::Dpll { budget: 1000 },
                },
            ],
            validation_seed: 0,
            validation_size: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProxyError {
    #[error("the solver portfolio is empty")]
    EmptyPortfolio,
    #[error("member {0} declares a zero description length")]
    ZeroLength(String),
    #[error("member {id} answers {answer} on validation formula {index}, which is wrong")]
    Inconsistent {
        id: String,
        index: usize,
        answer: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProxyValue {
    /// `None` when no member decides the formula.
    pub value: Option<usize>,
    pub decider: Option<String>,
    /// Largest declared length, the censoring limit.
    pub limit: usize,
}

impl ProxyValue {
    pub fn measured(&self) -> Measured {
        self.value
            .map_or(Measured::AboveLimit(self.limit), Measured::Value)
    }
}

/// Small mixed-width formulas, decided by brute force.
pub fn validation_formulas(seed: u64, count: usize) -> Vec<(CnfFormula, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let vars = rng.gen_range(1..=10);
            let clauses = rng.gen_range(1..=5 * vars as usize);
            let f = random_mixed_cnf(&mut rng, vars, clauses, 3);
            let sat = brute_force_sat(&f);
            (f, sat)
        })
        .collect()
}

/// A portfolio checked once, before any instance is evaluated.
#[derive(Debug, Clone)]
pub struct ValidatedPortfolio {
    members: Vec<PortfolioMember>,
}

impl ValidatedPortfolio {
    pub fn new(cfg: &ProxyConfig) -> Result<Self, ProxyError> {
        if cfg.portfolio.is_empty() {
            return Err(ProxyError::EmptyPortfolio);
        }
        if let Some(m) = cfg.portfolio.iter().find(|m| m.description_length == 0) {
            return Err(ProxyError::ZeroLength(m.id.clone()));
        }
        for (index, (f, sat)) in validation_formulas(cfg.validation_seed, cfg.validation_size)
            .iter()
            .enumerate()
        {
            for m in &cfg.portfolio {
                if let Some(answer) = m.decide(f).as_bool() {
                    if answer != *sat {
                        return Err(ProxyError::Inconsistent {
                            id: m.id.clone(),
                            index,
                            answer,
                        });
                    }
                }
            }
        }
        Ok(Self {
            members: cfg.portfolio.clone(),
        })
    }

    pub fn ic_proxy(&self, f: &CnfFormula) -> ProxyValue {
        let limit = self
            .members
            .iter()
            .map(|m| m.description_length)
            .max()
            .unwrap_or(0);
        let best = self
            .members
            .iter()
            .filter(|m| m.decide(f).is_known())
            .min_by_key(|m| m.description_length);
        ProxyValue {
            value: best.map(|m| m.description_length),
            decider: best.map(|m| m.id.clone()),
            limit,
        }
    }
}

pub fn solver_ic_proxy(f: &CnfFormula, cfg: &ProxyConfig) -> Result<ProxyValue, ProxyError> {
    Ok(ValidatedPortfolio::new(cfg)?.ic_proxy(f))
}
