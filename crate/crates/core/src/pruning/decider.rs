//! Candidate deciders for the factor-prefix language.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::BitString;
use crate::machine::{run_acceptor, ExecutionBudget, Program};
use crate::problems::fac::FAC_MAX;
use crate::problems::{encode_pair, fac_decide, largest_prime_factor, FacInstance};
use crate::verdict::Verdict;

pub trait CandidateDecider: Send + Sync {
    fn id(&self) -> String;
    /// Bits charged for describing the decider; always positive.
    fn description_length(&self) -> usize;
    fn decide(&self, z: &FacInstance) -> Verdict;

    /// Verdicts on `⟨x, a⟩` for each `a`; must agree with `decide`.
    fn decide_many(&self, x: u64, prefixes: &[BitString]) -> Vec<Verdict> {
        prefixes
            .iter()
            .map(|a| self.decide(&FacInstance { x, a: a.clone() }))
            .collect()
    }
}

/// Answers from trial factorization; consistent by construction.
#[derive(Debug, Clone)]
pub struct OracleDecider {
    pub description_length: usize,
}

impl Default for OracleDecider {
    fn default() -> Self {
        Self {
            description_length: 32,
        }
    }
}

impl CandidateDecider for OracleDecider {
    fn id(&self) -> String {
        "oracle".into()
    }

    fn description_length(&self) -> usize {
        self.description_length
    }

    fn decide(&self, z: &FacInstance) -> Verdict {
        fac_decide(z).map_or(Verdict::Unknown, Verdict::from_bool)
    }

    fn decide_many(&self, x: u64, prefixes: &[BitString]) -> Vec<Verdict> {
        if !(2..=FAC_MAX).contains(&x) {
            return vec![Verdict::Unknown; prefixes.len()];
        }
        let p = BitString::minimal_binary(largest_prime_factor(x));
        prefixes
            .iter()
            .map(|a| Verdict::from_bool(p.starts_with(a)))
            .collect()
    }
}

/// Consistent but silent beyond a prefix length: answers ⊥ on longer `a`.
#[derive(Debug, Clone)]
pub struct ShortSightedDecider {
    pub max_prefix: usize,
}

impl CandidateDecider for ShortSightedDecider {
    fn id(&self) -> String {
        format!("short-sighted-{}", self.max_prefix)
    }

    fn description_length(&self) -> usize {
        40
    }

    fn decide(&self, z: &FacInstance) -> Verdict {
        if z.a.len() > self.max_prefix {
            Verdict::Unknown
        } else {
            OracleDecider::default().decide(z)
        }
    }
}

/// Accepts each instance independently with probability `accept_rate`, as a
/// fixed function of `(seed, x, a)`.
#[derive(Debug, Clone)]
pub struct AdversaryDecider {
    pub index: usize,
    pub seed: u64,
    pub accept_rate: f64,
}

impl AdversaryDecider {
    /// `count` adversaries drawn from one seed, accept rate 1/2.
    pub fn pool(count: usize, seed: u64) -> Vec<Self> {
        (0..count)
            .map(|index| Self {
                index,
                seed,
                accept_rate: 0.5,
            })
            .collect()
    }
}

impl AdversaryDecider {
    fn stream(&self, x: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ (self.index as u64).rotate_left(32));
        rng.set_stream(x);
        rng
    }

    /// One word per prefix; the leading 1 keeps prefixes of different
    /// lengths apart.
    fn word(a: &BitString) -> u128 {
        a.iter()
            .fold(1u128, |acc, b| acc.wrapping_shl(1) | b as u128)
    }

    fn verdict(&self, u: u32) -> Verdict {
        Verdict::from_bool((u as f64 / (u32::MAX as f64 + 1.0)) < self.accept_rate)
    }
}

impl CandidateDecider for AdversaryDecider {
    fn id(&self) -> String {
        format!("adversary-{}", self.index)
    }

    fn description_length(&self) -> usize {
        16
    }

    fn decide(&self, z: &FacInstance) -> Verdict {
        let mut rng = self.stream(z.x);
        rng.set_word_pos(Self::word(&z.a));
        self.verdict(rng.next_u32())
    }

    fn decide_many(&self, x: u64, prefixes: &[BitString]) -> Vec<Verdict> {
        let mut rng = self.stream(x);
        prefixes
            .iter()
            .map(|a| {
                let w = Self::word(a);
                // seeking regenerates the block buffer; sorted input rarely needs it
                if rng.get_word_pos() != w {
                    rng.set_word_pos(w);
                }
                self.verdict(rng.next_u32())
            })
            .collect()
    }
}

/// A machine program run as an acceptor on the pair encoding.
#[derive(Debug, Clone)]
pub struct VmDecider {
    pub program: Program,
    pub budget: ExecutionBudget,
}

impl CandidateDecider for VmDecider {
    fn id(&self) -> String {
        format!("vm-{}", self.program.bits())
    }

    fn description_length(&self) -> usize {
        self.program.len().max(1)
    }

    fn decide(&self, z: &FacInstance) -> Verdict {
        run_acceptor(&self.program, &encode_pair(z.x, &z.a), self.budget).verdict()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::machine::assemble;

    fn z(x: u64, a: &str) -> FacInstance {
        FacInstance::new(x, bits(a)).unwrap()
    }

    #[test]
    fn oracle_and_short_sighted() {
        let o = OracleDecider::default();
        assert_eq!(o.decide(&z(15, "10")), Verdict::Accept);
        assert_eq!(o.decide(&z(15, "11")), Verdict::Reject);
        let s = ShortSightedDecider { max_prefix: 1 };
        assert_eq!(s.decide(&z(15, "1")), Verdict::Accept);
        assert_eq!(s.decide(&z(15, "10")), Verdict::Unknown);
    }

    #[test]
    fn adversaries_are_deterministic_and_varied() {
        let pool = AdversaryDecider::pool(4, 7);
        let inst: Vec<_> = ["0", "1", "00", "01", "10", "11", "101", "0101"]
            .iter()
            .map(|a| z(91, a))
            .collect();
        let answers: Vec<Vec<Verdict>> = pool
            .iter()
            .map(|d| inst.iter().map(|i| d.decide(i)).collect())
            .collect();
        let again: Vec<Vec<Verdict>> = pool
            .iter()
            .map(|d| inst.iter().map(|i| d.decide(i)).collect())
            .collect();
        assert_eq!(answers, again);
        assert!(answers.iter().flatten().any(|v| *v == Verdict::Accept));
        assert!(answers.iter().flatten().any(|v| *v == Verdict::Reject));
        assert_ne!(answers[0], answers[1]);
        let prefixes: Vec<BitString> = inst.iter().map(|i| i.a.clone()).collect();
        for (d, row) in pool.iter().zip(&answers) {
            assert_eq!(&d.decide_many(91, &prefixes), row);
        }
        let o = OracleDecider::default();
        let truth: Vec<Verdict> = inst.iter().map(|i| o.decide(i)).collect();
        assert_eq!(o.decide_many(91, &prefixes), truth);
    }

    #[test]
    fn vm_decider_runs_the_program() {
        let d = VmDecider {
            program: assemble("ACCEPT").unwrap(),
            budget: ExecutionBudget::new(10),
        };
        assert_eq!(d.decide(&z(15, "1")), Verdict::Accept);
        assert_eq!(d.description_length(), 3);
    }
}
