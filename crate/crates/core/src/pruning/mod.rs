//! Extend-and-prune search for the largest prime factor of `x` using a pool
//! of untrusted deciders for the factor-prefix language.
//!
//! A round queries every surviving decider on every live string, ejects any
//! decider that accepts two distinct strings of one length, and keeps only
//! the strings some survivor accepted. The survivors are then extended by
//! the least `k` that brings the live set back to at least `2m` strings,
//! where `m` is the pool size.
//!
//! Rounds only land on lengths `|b| + k`, so the factor itself may end
//! between two of them. Each round therefore also runs a completion scan:
//! every prefix of a live string at an intermediate length is queried under
//! the same one-per-length ejection rule. Accepted strings from either pass
//! are kept as candidates when they read as a prime divisor of `x`; the
//! answer is the largest one. The search stops early once the cofactor of a
//! candidate is smaller than the candidate, which certifies it as largest.

mod decider;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bits::BitString;
use crate::problems::{largest_prime_factor, FacInstance};
use crate::verdict::Verdict;

pub use decider::{
    AdversaryDecider, CandidateDecider, OracleDecider, ShortSightedDecider, VmDecider,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PruneError {
    #[error("the decider pool is empty")]
    EmptyPool,
    #[error("x = {0} has no prime factor to search for")]
    BadInput(u64),
    #[error("round {round}: no live strings while {good} deciders survive")]
    EmptyPositions { round: usize, good: usize },
    #[error("no survivor accepted any live string and no candidate was found (round {round})")]
    PremiseViolated { round: usize },
    #[error("audit failed in round {round}: {detail}")]
    Audit { round: usize, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruneState {
    /// Indices into the pool of deciders not yet ejected.
    pub good: Vec<usize>,
    /// Live strings, all of one length.
    pub pos: Vec<BitString>,
    /// Length of the strings the live set was extended from.
    pub base_len: usize,
    pub m: usize,
    pub round: usize,
}

impl PruneState {
    /// All strings of length `width`, every decider in good standing.
    pub fn initial(m: usize, width: usize) -> Self {
        Self {
            good: (0..m).collect(),
            pos: BitString::all_of_length(width).collect(),
            base_len: 0,
            m,
            round: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.pos.first().map_or(self.base_len, BitString::len)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ejection {
    pub decider: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    pub round: usize,
    pub length: usize,
    pub good_before: usize,
    pub pos_before: usize,
    pub ejected: Vec<Ejection>,
    pub good_after: usize,
    pub pos_after: usize,
    pub runs: u64,
    pub completion_runs: u64,
    /// Accepted strings from the completion scan.
    pub partial: Vec<String>,
    /// Prime divisors of `x` among everything accepted this round.
    pub verified: Vec<u64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PruneConfig {
    /// Width of the first live set; raised if it gives fewer than `2m` strings.
    pub initial_width: Option<usize>,
    /// Check every round against the true factor.
    pub audit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PruneOutcome {
    pub x: u64,
    pub m: usize,
    pub factor: u64,
    pub factor_bits: String,
    pub rounds: usize,
    pub found_in_round: usize,
    pub certified: bool,
    pub total_runs: u64,
    /// `4 n m²` decider runs with `n = |x|`.
    pub run_bound: u64,
    #[serde(skip)]
    pub records: Vec<RoundRecord>,
}

impl PruneOutcome {
    /// One JSON object per round, then the result.
    pub fn trace_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self
            .records
            .iter()
            .map(|r| serde_json::to_string(r).expect("round records serialize"))
            .collect();
        lines.push(serde_json::json!({ "result": self }).to_string());
        lines
    }
}

/// Least `k` with `2^k · live ≥ 2m`.
pub fn extension_width(live: usize, m: usize) -> usize {
    let mut k = 0;
    while (live << k) < 2 * m {
        k += 1;
    }
    k
}

pub fn extend(state: &PruneState, k: usize) -> PruneState {
    let pos = state
        .pos
        .iter()
        .flat_map(|b| BitString::all_of_length(k).map(move |c| b.concat(&c)))
        .collect();
    PruneState {
        good: state.good.clone(),
        pos,
        base_len: state.len(),
        m: state.m,
        round: state.round,
    }
}

fn is_prime(v: u64) -> bool {
    v >= 2 && largest_prime_factor(v) == v
}

/// The value of `s` when it is the minimal binary of a prime divisor of `x`.
fn as_prime_divisor(x: u64, s: &BitString) -> Option<u64> {
    if s.get(0) != Some(true) || s.len() > 63 {
        return None;
    }
    let v = s.to_uint()?;
    (x % v == 0 && is_prime(v)).then_some(v)
}

/// `x` with every factor `p` removed is below `p`.
fn certifies_largest(x: u64, p: u64) -> bool {
    let mut y = x;
    while y % p == 0 {
        y /= p;
    }
    y < p
}

/// Runs each surviving decider on each string. Rows follow `good`.
fn query(
    x: u64,
    pool: &[&dyn CandidateDecider],
    good: &[usize],
    strings: &[BitString],
) -> Vec<Vec<Verdict>> {
    good.par_iter()
        .map(|&d| pool[d].decide_many(x, strings))
        .collect()
}

/// Ejects deciders that accept two strings of one length. Returns the
/// remaining indices, each with the strings it accepted.
fn eject(
    pool: &[&dyn CandidateDecider],
    good: &[usize],
    strings: &[BitString],
    answers: &[Vec<Verdict>],
    ejected: &mut Vec<Ejection>,
) -> Vec<(usize, Vec<BitString>)> {
    let mut keep = Vec::new();
    for (row, &d) in answers.iter().zip(good) {
        let mut first_at_len: Vec<Option<&BitString>> = Vec::new();
        let mut clash = None;
        for (b, v) in strings.iter().zip(row) {
            if *v != Verdict::Accept {
                continue;
            }
            if first_at_len.len() <= b.len() {
                first_at_len.resize(b.len() + 1, None);
            }
            match first_at_len[b.len()] {
                Some(prev) => {
                    clash = Some((prev.clone(), b.clone()));
                    break;
                }
                None => first_at_len[b.len()] = Some(b),
            }
        }
        match clash {
            Some((p, q)) => ejected.push(Ejection {
                decider: pool[d].id(),
                reason: format!("accepted both {p} and {q}"),
            }),
            None => keep.push((d, first_at_len.into_iter().flatten().cloned().collect())),
        }
    }
    keep
}

/// One prune round on an already extended state. The post-state keeps at
/// most one live string per surviving decider.
pub fn prune_round(
    x: u64,
    pool: &[&dyn CandidateDecider],
    state: &PruneState,
) -> Result<(PruneState, RoundRecord), PruneError> {
    let round = state.round + 1;
    if state.pos.is_empty() {
        return Err(PruneError::EmptyPositions {
            round,
            good: state.good.len(),
        });
    }
    let length = state.len();
    let mut ejected = Vec::new();
    let answers = query(x, pool, &state.good, &state.pos);
    let runs = (state.good.len() * state.pos.len()) as u64;
    let full = eject(pool, &state.good, &state.pos, &answers, &mut ejected);
    let good: Vec<usize> = full.iter().map(|(d, _)| *d).collect();

    let prefixes: Vec<BitString> = (state.base_len + 1..length)
        .flat_map(|l| {
            state
                .pos
                .iter()
                .map(move |b| b.slice(0, l))
                .collect::<BTreeSet<_>>()
        })
        .collect();
    let answers = query(x, pool, &good, &prefixes);
    let completion_runs = (good.len() * prefixes.len()) as u64;
    let completion = eject(pool, &good, &prefixes, &answers, &mut ejected);
    let good: Vec<usize> = completion.iter().map(|(d, _)| *d).collect();
    // only deciders that survived both passes vouch for a string
    let accepted: BTreeSet<&BitString> = full
        .iter()
        .filter(|(d, _)| good.contains(d))
        .flat_map(|(_, acc)| acc)
        .collect();
    let pos: Vec<BitString> = state
        .pos
        .iter()
        .filter(|b| accepted.contains(b))
        .cloned()
        .collect();
    let partial: BTreeSet<BitString> = completion.into_iter().flat_map(|(_, acc)| acc).collect();

    let verified: Vec<u64> = pos
        .iter()
        .chain(partial.iter())
        .filter_map(|s| as_prime_divisor(x, s))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let record = RoundRecord {
        round,
        length,
        good_before: state.good.len(),
        pos_before: state.pos.len(),
        ejected,
        good_after: good.len(),
        pos_after: pos.len(),
        runs,
        completion_runs,
        partial: partial.iter().map(ToString::to_string).collect(),
        verified,
    };
    let next = PruneState {
        good,
        pos,
        base_len: state.base_len,
        m: state.m,
        round,
    };
    Ok((next, record))
}

fn audit(
    x: u64,
    state: &PruneState,
    record: &RoundRecord,
    oracle_ids: &[String],
) -> Result<(), PruneError> {
    let fail = |detail: String| PruneError::Audit {
        round: record.round,
        detail,
    };
    if let Some(e) = record
        .ejected
        .iter()
        .find(|e| oracle_ids.contains(&e.decider))
    {
        return Err(fail(format!("consistent decider {} ejected", e.decider)));
    }
    if state.pos.len() > state.m {
        return Err(fail(format!(
            "{} live strings exceed m = {}",
            state.pos.len(),
            state.m
        )));
    }
    let p = BitString::minimal_binary(largest_prime_factor(x));
    if record.length <= p.len() && !state.pos.contains(&p.slice(0, record.length)) {
        return Err(fail(format!(
            "true prefix of {p} lost at length {}",
            record.length
        )));
    }
    Ok(())
}

/// Searches for the largest prime factor of `x`, starting from the empty
/// prefix.
pub fn extend_and_prune(
    x: u64,
    pool: &[&dyn CandidateDecider],
    config: PruneConfig,
) -> Result<PruneOutcome, PruneError> {
    let m = pool.len();
    if m == 0 {
        return Err(PruneError::EmptyPool);
    }
    if FacInstance::new(x, BitString::new()).is_err() {
        return Err(PruneError::BadInput(x));
    }
    let n = 64 - x.leading_zeros() as usize;
    let oracle_ids: Vec<String> = if config.audit {
        let o = OracleDecider::default().id();
        pool.iter().map(|d| d.id()).filter(|id| *id == o).collect()
    } else {
        Vec::new()
    };

    let width = extension_width(1, m).max(config.initial_width.unwrap_or(0));
    let mut state = PruneState::initial(m, width);
    let mut records = Vec::new();
    let mut best: Option<(u64, usize)> = None;
    let mut certified;
    loop {
        let (next, record) = prune_round(x, pool, &state)?;
        if config.audit {
            audit(x, &next, &record, &oracle_ids)?;
        }
        for &p in &record.verified {
            if best.map_or(true, |(b, _)| p > b) {
                best = Some((p, record.round));
            }
        }
        certified = best.is_some_and(|(p, _)| certifies_largest(x, p));
        let length = record.length;
        records.push(record);
        if certified || next.pos.is_empty() || length >= n {
            state = next;
            break;
        }
        let k = extension_width(next.pos.len(), m);
        state = extend(&next, k);
    }

    let rounds = state.round;
    let (factor, found_in_round) = best.ok_or(PruneError::PremiseViolated { round: rounds })?;
    let total_runs = records.iter().map(|r| r.runs + r.completion_runs).sum();
    Ok(PruneOutcome {
        x,
        m,
        factor,
        factor_bits: BitString::minimal_binary(factor).to_string(),
        rounds,
        found_in_round,
        certified,
        total_runs,
        run_bound: 4 * n as u64 * (m as u64).pow(2),
        records,
    })
}

/// Pool size and run bounds for `m = ⌊2^(n^δ)⌋` deciders on `n`-bit input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostModel {
    pub n: usize,
    pub delta: f64,
    pub m: u64,
    pub initial_width: usize,
    pub runs_per_round: u64,
    pub total_runs_bound: u64,
    /// Each run is charged the time bound at this input length.
    pub run_time_argument: usize,
}

pub fn cost_model(n: usize, delta: f64) -> CostModel {
    let exponent = (n as f64).powf(delta);
    // guard against 8^(1/3) landing just under 2
    let m = (exponent.exp2() + 1e-9).floor().max(1.0) as u64;
    CostModel {
        n,
        delta,
        m,
        initial_width: extension_width(1, m as usize),
        runs_per_round: 4 * m * m,
        total_runs_bound: 4 * n as u64 * m * m,
        run_time_argument: 2 * n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    fn oracle() -> OracleDecider {
        OracleDecider::default()
    }

    fn run(x: u64, pool: &[&dyn CandidateDecider]) -> PruneOutcome {
        extend_and_prune(
            x,
            pool,
            PruneConfig {
                audit: true,
                ..PruneConfig::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn oracle_alone_walks_one_bit_per_round() {
        let o = oracle();
        let out = run(15, &[&o]);
        assert_eq!(out.factor_bits, "101");
        assert_eq!(out.rounds, 3);
        assert!(out.certified);
        assert_eq!(run(4, &[&o]).factor_bits, "10");
        let lengths: Vec<usize> = out.records.iter().map(|r| r.length).collect();
        assert_eq!(lengths, vec![1, 2, 3]);
    }

    #[test]
    fn adversaries_are_ejected() {
        let o = oracle();
        let adv = AdversaryDecider::pool(50, 3);
        let mut pool: Vec<&dyn CandidateDecider> = vec![&o];
        pool.extend(adv.iter().map(|a| a as &dyn CandidateDecider));
        let out = run(15, &pool);
        assert_eq!(out.factor, 5);
        let first = &out.records[0];
        assert_eq!(first.pos_before, 128);
        assert_eq!(first.ejected.len(), 50);
        assert!(first
            .ejected
            .iter()
            .all(|e| e.reason.starts_with("accepted both")));
        assert!(out.total_runs <= out.run_bound);
    }

    #[test]
    fn long_factor_needs_several_rounds() {
        let o = oracle();
        let adv = AdversaryDecider::pool(3, 11);
        let pool: Vec<&dyn CandidateDecider> = vec![&o, &adv[0], &adv[1], &adv[2]];
        // 1021 is prime; m = 4 starts at width 3
        let out = run(2 * 1021, &pool);
        assert_eq!(out.factor, 1021);
        assert!(out.rounds >= 2 && out.rounds <= 11);
        for r in &out.records {
            assert!(r.pos_after <= 4);
        }
    }

    #[test]
    fn uncertified_answers_run_to_exhaustion() {
        let o = oracle();
        // 24 = 2^3 * 3: cofactor 8 exceeds 3, so no early stop
        let out = run(24, &[&o]);
        assert_eq!(out.factor, 3);
        assert!(!out.certified);
        assert_eq!(out.found_in_round, 2);
        assert_eq!(out.rounds, 3);
    }

    #[test]
    fn silent_pool_is_a_diagnostic_error() {
        let s = ShortSightedDecider { max_prefix: 0 };
        let err = extend_and_prune(15, &[&s], PruneConfig::default()).unwrap_err();
        assert_eq!(err, PruneError::PremiseViolated { round: 1 });
        let empty = PruneState {
            pos: vec![],
            ..PruneState::initial(1, 1)
        };
        assert!(matches!(
            prune_round(15, &[&s], &empty),
            Err(PruneError::EmptyPositions { .. })
        ));
        assert_eq!(
            extend_and_prune(15, &[], PruneConfig::default()).unwrap_err(),
            PruneError::EmptyPool
        );
        assert_eq!(
            extend_and_prune(1, &[&s], PruneConfig::default()).unwrap_err(),
            PruneError::BadInput(1)
        );
    }

    #[test]
    fn single_round_filters() {
        let o = oracle();
        let state = PruneState::initial(1, 2);
        let (next, rec) = prune_round(15, &[&o], &state).unwrap();
        assert_eq!(next.pos, vec![bits("10")]);
        assert_eq!(rec.partial, vec!["1".to_string()]);
        assert_eq!(rec.runs, 4);
        assert_eq!(rec.completion_runs, 2);
        let ext = extend(&next, extension_width(1, 1));
        assert_eq!(ext.pos, vec![bits("100"), bits("101")]);
    }

    #[test]
    fn trace_ends_with_the_result() {
        let o = oracle();
        let lines = run(15, &[&o]).trace_lines();
        assert_eq!(lines.len(), 4);
        let last: serde_json::Value = serde_json::from_str(lines.last().unwrap()).unwrap();
        assert_eq!(last["result"]["factor_bits"], "101");
        let first: serde_json::Value = serde_json::from_str(&lines[0]).unwrap();
        assert_eq!(first["pos_after"], 1);
    }

    #[test]
    fn random_pools_respect_capacity() {
        use rand::{Rng, SeedableRng};
        for seed in 0..500u64 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let adv: Vec<AdversaryDecider> = (0..100)
                .map(|index| AdversaryDecider {
                    index,
                    seed,
                    accept_rate: rng.gen_range(0.0..0.05),
                })
                .collect();
            let pool: Vec<&dyn CandidateDecider> =
                adv.iter().map(|a| a as &dyn CandidateDecider).collect();
            let width = rng.gen_range(extension_width(1, 100)..=9);
            let state = PruneState::initial(100, width);
            let x = rng.gen_range(2..1_000_000);
            let (next, rec) = prune_round(x, &pool, &state).unwrap();
            assert!(next.pos.len() <= next.m, "seed {seed}");
            assert!(next.pos.len() <= next.good.len());
            assert_eq!(rec.good_before - rec.ejected.len(), rec.good_after);
            let ext = extend(&next, extension_width(next.pos.len().max(1), 100));
            assert!(next.pos.is_empty() || ext.pos.len() >= 2 * ext.m);
        }
    }

    #[test]
    fn double_acceptor_is_removed() {
        let adv = AdversaryDecider {
            index: 0,
            seed: 0,
            accept_rate: 1.0,
        };
        let o = oracle();
        let state = PruneState::initial(2, 1);
        let (next, rec) = prune_round(15, &[&adv, &o], &state).unwrap();
        assert_eq!(next.good, vec![1]);
        assert_eq!(rec.ejected[0].reason, "accepted both 0 and 1");
        assert_eq!(next.pos, vec![bits("1")]);
    }

    #[test]
    fn cost_model_values() {
        let c = cost_model(4, 0.5);
        assert_eq!((c.m, c.runs_per_round), (4, 64));
        assert_eq!(c.total_runs_bound, 256);
        assert_eq!(c.initial_width, 3);
        assert_eq!(cost_model(9, 1.0 / 3.0).m, 4);
        assert_eq!(cost_model(8, 1.0 / 3.0).m, 4);
        assert_eq!(extension_width(1, 51), 7);
        assert_eq!(extension_width(3, 4), 2);
    }
}
