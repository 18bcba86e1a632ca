//! Gap scan over a descending, subnormalised probability list.
//!
//! The list is padded with a trailing zero, so the gap may sit at the drop
//! after the last entry (index `k`).

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GapError {
    #[error("empty probability list")]
    Empty,
    #[error("negative probability at position {0}")]
    Negative(usize),
    #[error("list not descending at position {0}")]
    Unsorted(usize),
    #[error("probabilities sum above 1")]
    Overweight,
    #[error("no gap reaches the threshold")]
    NoGap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapIndex<T> {
    /// 1-based: the gap is `p[index] - p[index + 1]`.
    pub index: usize,
    pub gap: T,
    pub threshold: T,
}

/// `p1² / (2 + p1)`.
pub fn gap_threshold<T: Scalar>(p1: &T) -> T {
    let two = T::one() + T::one();
    p1.clone() * p1.clone() / (two + p1.clone())
}

pub fn gap_index<T: Scalar>(probs: &[T]) -> Result<GapIndex<T>, GapError> {
    let first = probs.first().ok_or(GapError::Empty)?;
    let mut sum = T::zero();
    for (i, p) in probs.iter().enumerate() {
        if *p < T::zero() {
            return Err(GapError::Negative(i));
        }
        if i > 0 && probs[i - 1] < *p {
            return Err(GapError::Unsorted(i));
        }
        sum = sum + p.clone();
    }
    let slack = if T::tolerance() == T::zero() {
        T::zero()
    } else {
        T::from_f64_lossy(1e-9)
    };
    if sum > T::one() + slack {
        return Err(GapError::Overweight);
    }
    let threshold = gap_threshold(first);
    for i in 0..probs.len() {
        let next = probs.get(i + 1).cloned().unwrap_or_else(T::zero);
        let gap = probs[i].clone() - next;
        if gap.ge_tol(&threshold) {
            return Ok(GapIndex {
                index: i + 1,
                gap,
                threshold,
            });
        }
    }
    Err(GapError::NoGap)
}
