//! Strongly-piecewise witnesses: inside each probe interval `J_k`, the longest
//! subinterval `I` on which the structured set `Λ` is contained in `A`.

use crate::error::{Error, Result};
use crate::textfmt::fingerprint;
use crate::window::{Interval, IntervalFamily, WindowedSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PickedInterval {
    /// Index of the containing `J_k`.
    pub k: usize,
    pub interval: Interval,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseWitness {
    /// Fingerprint of `Λ`.
    pub lambda_id: String,
    /// Sorted by length, ties by `k`.
    pub picked: Vec<PickedInterval>,
}

/// Positions `n ∈ J` with `n ∈ Λ` and `n ∉ A`.
fn violations<'a>(a: &'a WindowedSet, lambda: &'a WindowedSet, j: Interval) -> impl Iterator<Item = i64> + 'a {
    lambda
        .iter()
        .skip_while(move |&n| n < j.lo)
        .take_while(move |&n| n < j.hi)
        .filter(move |&n| !a.contains(n))
}

/// `Λ ∩ I ⊆ A`.
pub fn is_clean(a: &WindowedSet, lambda: &WindowedSet, i: Interval) -> bool {
    violations(a, lambda, i).next().is_none()
}

/// Longest violation-free subinterval of `j`; the leftmost one on ties.
pub fn longest_clean(a: &WindowedSet, lambda: &WindowedSet, j: Interval) -> Interval {
    let mut best = Interval { lo: j.lo, hi: j.lo };
    let mut start = j.lo;
    for v in violations(a, lambda, j).chain(std::iter::once(j.hi)) {
        if v - start > best.hi - best.lo {
            best = Interval { lo: start, hi: v };
        }
        start = v + 1;
    }
    best
}

/// One maximal clean interval per `J_k` of length at least `min_len`, sorted so
/// lengths are nondecreasing. `None` when no `J_k` yields one.
pub fn pw_witness(
    a: &WindowedSet,
    lambda: &WindowedSet,
    jks: &IntervalFamily,
    min_len: u64,
) -> Result<Option<PiecewiseWitness>> {
    for j in jks.intervals() {
        for (name, s) in [("A", a), ("Λ", lambda)] {
            if !s.window().contains_interval(j) {
                return Err(Error::InvalidArgument(format!(
                    "interval {j} outside the window {} of {name}",
                    s.window()
                )));
            }
        }
    }
    let mut picked: Vec<PickedInterval> = jks
        .intervals()
        .iter()
        .enumerate()
        .map(|(k, &j)| PickedInterval { k, interval: longest_clean(a, lambda, j) })
        .filter(|p| p.interval.len() >= min_len.max(1))
        .collect();
    if picked.is_empty() {
        return Ok(None);
    }
    picked.sort_by_key(|p| (p.interval.len(), p.k));
    Ok(Some(PiecewiseWitness {
        lambda_id: fingerprint(lambda),
        picked,
    }))
}
