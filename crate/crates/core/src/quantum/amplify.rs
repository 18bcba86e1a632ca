//! Amplification by repeated sampling and a rank cut.
//!
//! From the exact distribution we fix `j` (a gap position at or after the
//! target's rank) and `a` (the target's position among the top `j` strings in
//! lexicographic order). One trial draws `n` samples, keeps the `j` most
//! frequent strings, orders them lexicographically and outputs the `a`-th.
//! The failure probability is at most `r^-n` with `r = exp(δ²/3)` and
//! `2δ = ε²/(2+ε)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::circuit::GateCircuit;
use super::gap::{gap_index, GapError};
use super::sim::{simulate, OutcomeDistribution, ResourceError};
use crate::bits::BitString;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AmplifyError {
    #[error("target {0} has probability zero")]
    ZeroProbability(BitString),
    #[error(transparent)]
    Resource(#[from] ResourceError),
    #[error(transparent)]
    Gap(#[from] GapError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmplificationPlan {
    pub n_copies: usize,
    /// Rank cut: size of the kept list.
    pub j: usize,
    /// 1-based position of the target in the kept list.
    pub a: usize,
    /// Target probability.
    pub epsilon: f64,
    pub two_delta: f64,
    pub r: f64,
}

impl AmplificationPlan {
    pub fn delta(&self) -> f64 {
        self.two_delta / 2.0
    }

    /// `r^-n`.
    pub fn failure_bound(&self) -> f64 {
        failure_bound(self.epsilon, self.n_copies)
    }
}

/// `(2δ, r)` for a target probability `ε`.
pub fn amplification_constants(epsilon: f64) -> (f64, f64) {
    let two_delta = epsilon * epsilon / (2.0 + epsilon);
    let delta = two_delta / 2.0;
    (two_delta, (delta * delta / 3.0).exp())
}

pub fn failure_bound(epsilon: f64, n_copies: usize) -> f64 {
    let (_, r) = amplification_constants(epsilon);
    r.powf(-(n_copies as f64))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmplifyResult {
    pub plan: AmplificationPlan,
    pub trials: usize,
    pub successes: usize,
    pub success_estimate: f64,
}

impl AmplifyResult {
    pub fn failure_rate(&self) -> f64 {
        1.0 - self.success_estimate
    }

    /// Binomial standard error of the failure rate at probability `p`.
    pub fn standard_error_at(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// Derives `j` and `a` from the exact distribution.
pub fn plan(
    dist: &OutcomeDistribution<f64>,
    target: &BitString,
    n_copies: usize,
) -> Result<AmplificationPlan, AmplifyError> {
    let ranked = dist.ranked();
    let m = ranked
        .iter()
        .position(|(x, _)| x == target)
        .ok_or_else(|| AmplifyError::ZeroProbability(target.clone()))?;
    let epsilon = ranked[m].1;
    // scan from the target's rank so the cut cannot fall above it
    let tail: Vec<f64> = ranked[m..].iter().map(|(_, p)| *p).collect();
    let g = gap_index(&tail)?;
    let j = m + g.index;
    let mut top: Vec<&BitString> = ranked[..j].iter().map(|(x, _)| x).collect();
    top.sort();
    let a = top
        .iter()
        .position(|x| *x == target)
        .expect("target within cut")
        + 1;
    let (two_delta, r) = amplification_constants(epsilon);
    Ok(AmplificationPlan {
        n_copies,
        j,
        a,
        epsilon,
        two_delta,
        r,
    })
}

/// One trial's output, or `None` when fewer than `a` distinct strings were seen.
fn trial(
    outcomes: &[BitString],
    cumulative: &[f64],
    plan: &AmplificationPlan,
    rng: &mut impl Rng,
) -> Option<usize> {
    let mut counts = vec![0usize; outcomes.len()];
    for _ in 0..plan.n_copies {
        let u: f64 = rng.gen::<f64>() * cumulative.last().copied().unwrap_or(1.0);
        let k = cumulative
            .partition_point(|&c| c <= u)
            .min(outcomes.len() - 1);
        counts[k] += 1;
    }
    let mut seen: Vec<usize> = (0..outcomes.len()).filter(|&k| counts[k] > 0).collect();
    // most frequent first; equal counts fall back to lexicographic order
    seen.sort_by(|&x, &y| {
        counts[y]
            .cmp(&counts[x])
            .then_with(|| outcomes[x].cmp(&outcomes[y]))
    });
    seen.truncate(plan.j);
    seen.sort_by(|&x, &y| outcomes[x].cmp(&outcomes[y]));
    seen.get(plan.a - 1).copied()
}

/// Monte-Carlo estimate of the amplified success probability. Trial `i`
/// draws from ChaCha stream `i` under `seed`, so the result does not depend
/// on the worker count.
pub fn amplify(
    circuit: &GateCircuit,
    target: &BitString,
    n_copies: usize,
    trials: usize,
    seed: u64,
) -> Result<AmplifyResult, AmplifyError> {
    let dist = simulate::<f64>(circuit)?;
    amplify_distribution(&dist, target, n_copies, trials, seed)
}

pub fn amplify_distribution(
    dist: &OutcomeDistribution<f64>,
    target: &BitString,
    n_copies: usize,
    trials: usize,
    seed: u64,
) -> Result<AmplifyResult, AmplifyError> {
    let plan = plan(dist, target, n_copies)?;
    let outcomes: Vec<BitString> = dist.iter().map(|(x, _)| x.clone()).collect();
    let cumulative: Vec<f64> = dist
        .iter()
        .scan(0.0, |acc, (_, p)| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let target_idx = outcomes
        .iter()
        .position(|x| x == target)
        .expect("target present");
    let successes = (0..trials as u64)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            trial(&outcomes, &cumulative, &plan, &mut rng) == Some(target_idx)
        })
        .count();
    Ok(AmplifyResult {
        plan,
        trials,
        successes,
        success_estimate: successes as f64 / trials.max(1) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::quantum::Gate;
    use std::collections::BTreeMap;

    fn single_h() -> GateCircuit {
        GateCircuit::measure_all(1, vec![Gate::H(0)]).unwrap()
    }

    fn three_way() -> OutcomeDistribution<f64> {
        let mut m = BTreeMap::new();
        m.insert(bits("00"), 0.5);
        m.insert(bits("01"), 0.3);
        m.insert(bits("10"), 0.2);
        OutcomeDistribution::from_map(m)
    }

    #[test]
    fn constants_for_half() {
        let (two_delta, r) = amplification_constants(0.5);
        assert!((two_delta - 0.1).abs() < 1e-15);
        assert!((r - (0.05f64 * 0.05 / 3.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn certain_target_always_succeeds() {
        let c = GateCircuit::measure_all(1, vec![Gate::X(0)]).unwrap();
        for n in [1, 5, 40] {
            let res = amplify(&c, &bits("1"), n, 200, 3).unwrap();
            assert_eq!(res.success_estimate, 1.0);
            assert_eq!((res.plan.j, res.plan.a), (1, 1));
        }
    }

    #[test]
    fn single_h_plan_and_bound() {
        let res = amplify(&single_h(), &bits("0"), 200, 1000, 7).unwrap();
        assert_eq!((res.plan.j, res.plan.a), (2, 1));
        assert!(res.success_estimate >= 1.0 - res.plan.failure_bound() - 0.02);
    }

    #[test]
    fn zero_probability_target_is_an_error() {
        assert!(matches!(
            amplify(&single_h(), &bits("00"), 10, 10, 1),
            Err(AmplifyError::ZeroProbability(_))
        ));
    }

    #[test]
    fn three_way_plan() {
        let p = plan(&three_way(), &bits("01"), 10).unwrap();
        // from rank 2: [0.3, 0.2] has threshold 0.09/2.3; gap 0.1 at the first step
        assert_eq!((p.j, p.a), (2, 2));
    }

    #[test]
    fn three_way_success_grows() {
        let s: Vec<f64> = [10, 50, 250]
            .iter()
            .map(|&n| {
                amplify_distribution(&three_way(), &bits("01"), n, 1000, 11)
                    .unwrap()
                    .success_estimate
            })
            .collect();
        assert!(s[0] < s[1] && s[1] < s[2], "{s:?}");
    }

    #[test]
    fn reproducible_across_thread_counts() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| amplify_distribution(&three_way(), &bits("01"), 30, 500, 5).unwrap())
        };
        assert_eq!(run(1), run(4));
    }
}
