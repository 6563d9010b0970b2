//! Counting self-maps of the line with prescribed ramification at two
//! pairs of points, summed over eigenvalue pairs.

use crate::error::{Error, Result};
use crate::field::is_prime;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlphaPair {
    pub a1: u64,
    pub a2: u64,
}

fn check_p(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// `min{p - 2α1, p - 2α2, 2α1, 2α2}`.
pub fn maps_for_alpha(p: u64, pair: AlphaPair) -> Result<u64> {
    check_p(p)?;
    for a in [pair.a1, pair.a2] {
        if a == 0 || 2 * a >= p {
            return Err(Error::BadAlpha(pair.a1, pair.a2, p));
        }
    }
    Ok([p - 2 * pair.a1, p - 2 * pair.a2, 2 * pair.a1, 2 * pair.a2].into_iter().min().unwrap())
}

/// Sum of [`maps_for_alpha`] over `1 ≤ α1, α2 ≤ (p-1)/2`.
pub fn total_count(p: u64) -> Result<u64> {
    check_p(p)?;
    let h = (p - 1) / 2;
    let mut total = 0;
    for a1 in 1..=h {
        for a2 in 1..=h {
            total += maps_for_alpha(p, AlphaPair { a1, a2 })?;
        }
    }
    Ok(total)
}

/// `Σ_j #{(α1, α2) : j ≤ 2αi ≤ p - j}`, the same sum grouped by level.
pub fn level_count(p: u64) -> Result<u64> {
    check_p(p)?;
    let h = (p - 1) / 2;
    Ok((1..=h)
        .map(|j| {
            let n = (1..=h).filter(|a| j <= 2 * a && 2 * a + j <= p).count() as u64;
            n * n
        })
        .sum())
}

/// `(p^3 - p) / 24`.
pub fn closed_form(p: u64) -> u64 {
    (p * p * p - p) / 24
}
