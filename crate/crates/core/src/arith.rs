//! Dyadic arithmetic used throughout the hit problem: digit sums, 2-adic
//! valuations, the spike counting function `mu`, the stability bound `xi`
//! and minimal spikes.

use crate::error::{HitError, Result};
use crate::f2poly::Monomial;

/// A slice `(n, d)` of the polynomial algebra: `n` variables, degree `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeProfile {
    pub n: usize,
    pub d: u32,
}

impl DegreeProfile {
    pub fn new(n: usize, d: u32) -> Result<Self> {
        if n == 0 {
            return Err(HitError::InvalidArgument("variable count must be positive".into()));
        }
        Ok(DegreeProfile { n, d })
    }
}

/// Number of ones in the binary expansion of `d`.
#[inline]
pub fn alpha(d: u64) -> u32 {
    d.count_ones()
}

/// 2-adic valuation of `d`.
pub fn zeta(d: u64) -> Result<u32> {
    if d == 0 {
        return Err(HitError::InvalidArgument("2-adic valuation of 0 is undefined".into()));
    }
    Ok(d.trailing_zeros())
}

/// Smallest `m` with `alpha(d + m) <= m`, i.e. the least number of terms
/// `2^t - 1` (t > 0) summing to `d`.
pub fn mu(d: u64) -> u32 {
    let mut m = 0u64;
    loop {
        if alpha(d + m) as u64 <= m {
            return m as u32;
        }
        m += 1;
    }
}

/// `max(0, n - alpha(d + n) - zeta(d + n))`.
pub fn xi(n: usize, d: u64) -> u32 {
    let s = d + n as u64;
    assert!(s >= 1, "xi needs d + n >= 1");
    let sub = alpha(s) + s.trailing_zeros();
    (n as u32).saturating_sub(sub)
}

/// True iff every exponent has the form `2^t - 1`.
pub fn is_spike(m: &Monomial) -> bool {
    m.exponents().iter().all(|&a| (a & a.wrapping_add(1)) == 0)
}

/// True when `alpha(d + n) > n`; such slices contain no admissible monomial.
pub fn is_trivial_degree(n: usize, d: u32) -> bool {
    alpha(d as u64 + n as u64) > n as u32
}

/// The minimal spike of degree `d` in `n` variables:
/// `x_1^(2^t1 - 1) ... x_r^(2^tr - 1)` with `t1 > t2 > ... > t_{r-1} >= t_r > 0`
/// and `r = mu(d)`.
///
/// Parts are chosen greedily from the largest `t` down, backtracking when the
/// remainder cannot be completed with the parts still allowed.
pub fn minimal_spike(n: usize, d: u32) -> Result<Monomial> {
    let parts = mu(d as u64) as usize;
    if parts > n {
        return Err(HitError::NoSpike { n, d });
    }
    let mut ts = Vec::with_capacity(parts);
    if !spike_search(d as u64, parts, 33, &mut ts) {
        unreachable!("mu({d}) = {parts} guarantees a spike decomposition");
    }
    let mut exps = vec![0u32; n];
    for (slot, t) in ts.iter().enumerate() {
        exps[slot] = ((1u64 << t) - 1) as u32;
    }
    Monomial::new(&exps)
}

/// Fills `ts` with `left` exponents `t`, each below `bound` and strictly
/// decreasing except that the final two may coincide, with `sum(2^t - 1) = rest`.
fn spike_search(rest: u64, left: usize, bound: u32, ts: &mut Vec<u32>) -> bool {
    if left == 0 {
        return rest == 0;
    }
    if rest < left as u64 {
        return false;
    }
    // the last part may equal the previous one
    let top = if left == 1 && !ts.is_empty() { bound + 1 } else { bound };
    for t in (1..top).rev() {
        let part = (1u64 << t) - 1;
        if part > rest {
            continue;
        }
        if rest - part > max_tail(left - 1, t) {
            break;
        }
        ts.push(t);
        if spike_search(rest - part, left - 1, t, ts) {
            return true;
        }
        ts.pop();
    }
    false
}

/// Largest total of `k` further parts following a part `2^t - 1`.
fn max_tail(k: usize, t: u32) -> u64 {
    let mut total = 0u64;
    let mut cur = t;
    for i in 0..k {
        if i + 1 < k {
            cur = cur.saturating_sub(1).max(1);
        }
        total += (1u64 << cur) - 1;
    }
    total
}
