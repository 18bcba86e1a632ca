//! Batch evaluation of queasiness records and their CSV form.

use std::collections::BTreeMap;
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::proxy::{ProxyConfig, ProxyError, ValidatedPortfolio};
use super::{classify_queasy, compressor_cd_proxy, Measured, Mode, QueasinessRecord};
use crate::bits::BitString;
use crate::complexity::{
    AcceptorTable, ComplexityValue, GeneratorTable, SearchLimits, UniverseSpec,
};
use crate::machine::ExecutionBudget;
use crate::problems::generate::random_3cnf_at_ratio;
use crate::problems::{emit_dimacs, CnfFormula, FacInstance, Language};
use crate::quantum::{CircuitTable, DEFAULT_EPSILON};
use crate::reduction::reduce_to_sat;

/// Fixed column order of the landscape table.
pub const CSV_COLUMNS: [&str; 14] = [
    "instance_id",
    "language",
    "mode",
    "n",
    "ic",
    "qic",
    "cd",
    "c",
    "delta_ic",
    "ric",
    "class",
    "censored",
    "seed",
    "budgets",
];

#[derive(Debug, Clone, PartialEq)]
pub enum LandscapeInstance {
    Bits {
        id: String,
        x: BitString,
    },
    Formula {
        id: String,
        formula: CnfFormula,
        from_reduction: bool,
    },
}

impl LandscapeInstance {
    pub fn id(&self) -> &str {
        match self {
            LandscapeInstance::Bits { id, .. } | LandscapeInstance::Formula { id, .. } => id,
        }
    }

    /// Every string of each listed length, named by its bits.
    pub fn all_strings(lengths: impl IntoIterator<Item = usize>) -> Vec<Self> {
        lengths
            .into_iter()
            .flat_map(BitString::all_of_length)
            .map(|x| LandscapeInstance::Bits {
                id: if x.is_empty() {
                    "λ".into()
                } else {
                    x.to_string()
                },
                x,
            })
            .collect()
    }

    /// Reduction images of `pairs` followed by `random` 3-CNF formulas near
    /// the satisfiability threshold.
    pub fn formula_batch(pairs: &[FacInstance], random: usize, vars: u32, seed: u64) -> Vec<Self> {
        let mut out: Vec<Self> = pairs
            .iter()
            .filter_map(|z| {
                let art = reduce_to_sat(z).ok()?;
                Some(LandscapeInstance::Formula {
                    id: format!("fac-{z}"),
                    formula: art.formula,
                    from_reduction: true,
                })
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        out.extend((0..random).map(|i| LandscapeInstance::Formula {
            id: format!("random-{i}"),
            formula: random_3cnf_at_ratio(&mut rng, vars, 4.26),
            from_reduction: false,
        }));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeConfig {
    pub mode: Mode,
    pub language: String,
    pub max_program_len: usize,
    pub max_steps: u64,
    pub epsilon: f64,
    pub margin: usize,
    pub seed: u64,
    pub proxy: ProxyConfig,
    /// Quantum description length charged to reduction images in proxy mode.
    pub declared_qic: usize,
}

impl Default for LandscapeConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Exact,
            language: "parity".into(),
            max_program_len: 16,
            max_steps: 256,
            epsilon: DEFAULT_EPSILON,
            margin: 4,
            seed: 0,
            proxy: ProxyConfig::default(),
            declared_qic: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LandscapeError {
    #[error("unknown language {0:?}")]
    Language(String),
    #[error(transparent)]
    Proxy(#[from] ProxyError),
    #[error("{0}")]
    Limits(String),
}

impl LandscapeConfig {
    fn budgets(&self) -> String {
        match self.mode {
            Mode::Exact => format!(
                "len={};steps={};eps={}",
                self.max_program_len, self.max_steps, self.epsilon
            ),
            Mode::Proxy => {
                let members: Vec<String> = self
                    .proxy
                    .portfolio
                    .iter()
                    .map(|m| format!("{}:{}", m.id, m.description_length))
                    .collect();
                format!(
                    "portfolio={};window={};min_match={};qic={}",
                    members.join(","),
                    self.proxy.compressor.window_bits,
                    self.proxy.compressor.min_match,
                    self.declared_qic
                )
            }
        }
    }

    fn failed(
        &self,
        inst: &LandscapeInstance,
        language: &str,
        n: usize,
        why: String,
    ) -> QueasinessRecord {
        let limit = match self.mode {
            Mode::Exact => self.max_program_len,
            Mode::Proxy => 0,
        };
        QueasinessRecord {
            instance_id: inst.id().to_string(),
            language: language.to_string(),
            mode: self.mode,
            n,
            ic: Measured::AboveLimit(limit),
            qic: Measured::AboveLimit(limit),
            cd: Measured::AboveLimit(limit),
            c: Some(Measured::AboveLimit(limit)),
            seed: self.seed,
            budgets: self.budgets(),
            failure: Some(why),
        }
    }
}

/// Per-length tables for exact mode.
struct ExactTables {
    acceptors: AcceptorTable,
    qic: Vec<ComplexityValue>,
}

fn exact_records(
    instances: &[LandscapeInstance],
    cfg: &LandscapeConfig,
) -> Result<Vec<QueasinessRecord>, LandscapeError> {
    let lang: Language = cfg
        .language
        .parse()
        .map_err(|_| LandscapeError::Language(cfg.language.clone()))?;
    let budget = ExecutionBudget::new(cfg.max_steps);
    let generators = GeneratorTable::build(cfg.max_program_len, budget)
        .map_err(|e| LandscapeError::Limits(e.to_string()))?;
    let circuits = CircuitTable::from_generators(&generators);
    let lengths: std::collections::BTreeSet<usize> = instances
        .iter()
        .filter_map(|i| match i {
            LandscapeInstance::Bits { x, .. } => Some(x.len()),
            _ => None,
        })
        .collect();
    let mut tables: BTreeMap<usize, Result<ExactTables, String>> = BTreeMap::new();
    for n in lengths {
        let limits = SearchLimits::new(
            cfg.max_program_len,
            cfg.max_steps,
            UniverseSpec::SameLength(n),
        );
        let built = AcceptorTable::build(&lang, &limits)
            .map_err(|e| e.to_string())
            .and_then(|acceptors| {
                circuits
                    .qic_values(&lang, &limits.universe, cfg.epsilon)
                    .map(|qic| ExactTables { acceptors, qic })
                    .map_err(|e| e.to_string())
            });
        tables.insert(n, built);
    }
    Ok(instances
        .iter()
        .map(|inst| match inst {
            LandscapeInstance::Bits { x, .. } => match &tables[&x.len()] {
                Ok(t) => {
                    let j = UniverseSpec::SameLength(x.len())
                        .index_of(x)
                        .expect("instance lies in its own universe");
                    QueasinessRecord {
                        instance_id: inst.id().to_string(),
                        language: cfg.language.clone(),
                        mode: Mode::Exact,
                        n: x.len(),
                        ic: (&t.acceptors.ic_value(x).expect("member")).into(),
                        qic: (&t.qic[j]).into(),
                        cd: (&t.acceptors.cd_value(x).expect("member")).into(),
                        c: Some(if x.is_empty() {
                            Measured::AboveLimit(cfg.max_program_len)
                        } else {
                            (&generators.c_value(x)).into()
                        }),
                        seed: cfg.seed,
                        budgets: cfg.budgets(),
                        failure: None,
                    }
                }
                Err(e) => cfg.failed(inst, &cfg.language, x.len(), e.clone()),
            },
            LandscapeInstance::Formula { formula, .. } => cfg.failed(
                inst,
                "sat",
                formula.variable_count() as usize,
                "formulas need proxy mode".into(),
            ),
        })
        .collect())
}

fn dimacs_bits(f: &CnfFormula) -> BitString {
    emit_dimacs(f)
        .bytes()
        .flat_map(|b| BitString::from_uint(b as u64, 8).iter().collect::<Vec<_>>())
        .collect()
}

fn proxy_records(
    instances: &[LandscapeInstance],
    cfg: &LandscapeConfig,
) -> Result<Vec<QueasinessRecord>, LandscapeError> {
    let portfolio = ValidatedPortfolio::new(&cfg.proxy)?;
    Ok(instances
        .par_iter()
        .map(|inst| match inst {
            LandscapeInstance::Formula {
                formula,
                from_reduction,
                ..
            } => {
                let n = formula.variable_count() as usize;
                match compressor_cd_proxy(&dimacs_bits(formula), &cfg.proxy.compressor) {
                    Ok(cd) => QueasinessRecord {
                        instance_id: inst.id().to_string(),
                        language: "sat".into(),
                        mode: Mode::Proxy,
                        n,
                        ic: portfolio.ic_proxy(formula).measured(),
                        qic: if *from_reduction {
                            Measured::Value(cfg.declared_qic)
                        } else {
                            Measured::AboveLimit(0)
                        },
                        cd: Measured::Value(cd),
                        c: None,
                        seed: cfg.seed,
                        budgets: cfg.budgets(),
                        failure: None,
                    },
                    Err(e) => cfg.failed(inst, "sat", n, e.to_string()),
                }
            }
            LandscapeInstance::Bits { x, .. } => cfg.failed(
                inst,
                &cfg.language,
                x.len(),
                "bit strings need exact mode".into(),
            ),
        })
        .collect())
}

/// One record per instance, in input order. Instances that cannot be
/// evaluated become fully censored rows with the reason attached.
pub fn landscape(
    instances: &[LandscapeInstance],
    cfg: &LandscapeConfig,
) -> Result<Vec<QueasinessRecord>, LandscapeError> {
    match cfg.mode {
        Mode::Exact => exact_records(instances, cfg),
        Mode::Proxy => proxy_records(instances, cfg),
    }
}

fn cell(m: Option<Measured>) -> String {
    m.map_or_else(String::new, |m| m.to_string())
}

pub fn write_csv<W: Write>(records: &[QueasinessRecord], margin: usize, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        w.write_record([
            r.instance_id.clone(),
            r.language.clone(),
            r.mode.to_string(),
            r.n.to_string(),
            cell(Some(r.ic)),
            cell(Some(r.qic)),
            cell(Some(r.cd)),
            cell(r.c),
            r.delta_ic().map_or_else(String::new, |d| d.to_string()),
            r.ric()
                .map_or_else(String::new, |q| format!("{:.6}", q.raw)),
            classify_queasy(r, margin).to_string(),
            r.censored().join(";"),
            r.seed.to_string(),
            r.budgets.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::QueasyClass;

    fn csv_of(records: &[QueasinessRecord]) -> String {
        let mut buf = Vec::new();
        write_csv(records, 4, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_batch_is_header_only() {
        let r = landscape(&[], &LandscapeConfig::default()).unwrap();
        assert!(r.is_empty());
        assert_eq!(csv_of(&r), CSV_COLUMNS.join(",") + "\n");
    }

    #[test]
    fn parity_exact_records() {
        let cfg = LandscapeConfig::default();
        let inst = LandscapeInstance::all_strings(1..=3);
        let recs = landscape(&inst, &cfg).unwrap();
        assert_eq!(recs.len(), 14);
        for r in &recs {
            let (ic, qic) = (r.ic.value().unwrap(), r.qic.value().unwrap());
            assert_eq!(r.cd.value(), Some(ic));
            // the quantum side pays at most the embedding constant
            let q = r.ric().unwrap();
            assert!(
                q.raw.abs() <= 8.0 / ic as f64,
                "{} {}",
                r.instance_id,
                q.raw
            );
            assert!(qic <= ic + 8);
        }
        let text = csv_of(&recs);
        assert!(text
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("0,parity,exact,1,5,5,5,3,0,0.000000,hard,,0,"));
    }

    #[test]
    fn proxy_batch_has_easy_and_indeterminate_rows() {
        let pairs: Vec<FacInstance> = ["15:10", "15:11", "21:11", "35:111", "9:10"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let inst = LandscapeInstance::formula_batch(&pairs, 4, 20, 7);
        let cfg = LandscapeConfig {
            mode: Mode::Proxy,
            seed: 7,
            ..LandscapeConfig::default()
        };
        let recs = landscape(&inst, &cfg).unwrap();
        let classes: Vec<QueasyClass> = recs
            .iter()
            .map(|r| classify_queasy(r, cfg.margin))
            .collect();
        assert!(classes.contains(&QueasyClass::Easy), "{classes:?}");
        assert!(classes.contains(&QueasyClass::Indeterminate));
        let again = landscape(&LandscapeInstance::formula_batch(&pairs, 4, 20, 7), &cfg).unwrap();
        assert_eq!(csv_of(&recs), csv_of(&again));
    }

    #[test]
    fn wrong_mode_rows_are_censored() {
        let cfg = LandscapeConfig::default();
        let inst = LandscapeInstance::formula_batch(&["15:10".parse().unwrap()], 0, 3, 0);
        let recs = landscape(&inst, &cfg).unwrap();
        assert!(recs[0].failure.is_some());
        assert_eq!(classify_queasy(&recs[0], 4), QueasyClass::Indeterminate);
        let bad = LandscapeConfig {
            language: "klingon".into(),
            ..LandscapeConfig::default()
        };
        assert!(matches!(
            landscape(&[], &bad),
            Err(LandscapeError::Language(_))
        ));
    }
}
