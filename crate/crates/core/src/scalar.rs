//! Numeric abstraction for probabilities and amplitudes.
//!
//! [`Scalar`] covers everything that only needs field arithmetic and an
//! ordering (gap scans, threshold checks) and is implemented for `f32`, `f64`
//! and exact `Ratio<i64>`. [`Real`] adds the transcendental operations the
//! statevector simulator needs and is only available for floats.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

pub trait Scalar:
    Num + PartialOrd + Clone + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Slack allowed on threshold comparisons; zero for exact types.
    fn tolerance() -> Self;

    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite value")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `self >= other` up to [`tolerance`](Self::tolerance).
    fn ge_tol(&self, other: &Self) -> bool {
        self.clone() + Self::tolerance() >= *other
    }

    /// `self > other` by more than [`tolerance`](Self::tolerance).
    fn gt_tol(&self, other: &Self) -> bool {
        self.clone() > other.clone() + Self::tolerance()
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-6
    }
}

impl Scalar for Ratio<i64> {
    fn tolerance() -> Self {
        Ratio::from_integer(0)
    }
}

pub trait Real: Scalar + Float {}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerant_comparisons() {
        assert!(0.499_999_999_999_9_f64.ge_tol(&0.5));
        assert!(!0.5_f64.gt_tol(&0.5));
        let half = Ratio::new(1i64, 2);
        assert!(half.ge_tol(&half));
        assert!(!half.gt_tol(&half));
        assert!(Ratio::new(3i64, 5).gt_tol(&half));
    }
}
