//! Desk-scale laboratory for time-bounded classical and quantum instance
//! complexity.
//!
//! Every measure is computed exactly by enumerating programs of a small
//! reference machine ([`machine`]) over a finite universe of inputs. The
//! quantum measures count programs that print circuit descriptions, which
//! are then simulated exactly ([`quantum`]).

pub mod bits;
pub mod complexity;
pub mod machine;
pub mod metrics;
pub mod problems;
pub mod pruning;
pub mod quantum;
pub mod reduction;
pub mod scalar;
pub mod verdict;

pub use bits::BitString;
pub use scalar::{Real, Scalar};
pub use verdict::Verdict;

/// Default probability type.
pub type Prob = f64;
/// Exact probabilities for arithmetic-only routines such as the gap scan.
pub type ExactProb = num_rational::Ratio<i64>;
pub type StateVector = quantum::StateVector<f64>;
pub type StateVector32 = quantum::StateVector<f32>;
pub type Distribution = quantum::OutcomeDistribution<f64>;
