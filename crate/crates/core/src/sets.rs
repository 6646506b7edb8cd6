//! Elementary set constructions: difference sets, finite-sum sets, sums with
//! bounded gaps, interval densities and gap scans.

use std::collections::{BTreeSet, VecDeque};

use num_rational::Ratio;

use crate::bits::BitBuf;
use crate::error::{Error, Result};
use crate::window::{Interval, IntervalFamily, WindowedSet};

/// Largest `|E|` accepted by [`sumset`].
pub const DEFAULT_SUMSET_BOUND: usize = 24;

/// Largest `|P|` accepted by [`sh_d_oracle`].
pub const ORACLE_MAX_LEN: usize = 20;

/// Positive differences `{b − a : a, b ∈ s, b > a}` on the window `[1, hi − lo)`.
///
/// Every positive difference of two window members is below `hi − lo`, so the
/// output window never truncates.
pub fn delta_set(s: &WindowedSet) -> WindowedSet {
    let width = s.width().max(1) as usize;
    // Output bit i stands for the difference i + 1.
    let mut out = BitBuf::new(width - 1);
    for a in s.bits().ones() {
        out.or_shifted(s.bits(), -(a as i64 + 1));
    }
    WindowedSet::from_bits(1, out)
}

/// All nonempty sums of distinct elements of `e`, on the window `[1, Σe + 1)`.
pub fn sumset(e: &BTreeSet<u64>) -> Result<WindowedSet> {
    sumset_bounded(e, DEFAULT_SUMSET_BOUND)
}

pub fn sumset_bounded(e: &BTreeSet<u64>, bound: usize) -> Result<WindowedSet> {
    if e.len() > bound {
        return Err(Error::BoundExceeded {
            what: "|E|",
            got: e.len() as u64,
            limit: bound as u64,
        });
    }
    if e.contains(&0) {
        return Err(Error::InvalidArgument("sumset elements must be positive".into()));
    }
    let total: u64 = e.iter().sum();
    // bit k = sum k, including the empty sum at bit 0 which is dropped below
    let mut reach = BitBuf::new(total as usize + 1);
    reach.set(0);
    for &x in e {
        let prev = reach.clone();
        reach.or_shifted(&prev, x as i64);
    }
    let mut out = BitBuf::new(total as usize);
    out.or_shifted(&reach, -1);
    Ok(WindowedSet::from_bits(1, out))
}

/// A finite sequence `P = (p_1, …, p_n)` of positive integers together with
/// a gap parameter `d ≥ 1`.
///
/// `SH_d(P)` is the set of sums `p_{i_1} + … + p_{i_k}` over indices
/// `i_1 < … < i_k` with `i_{t+1} − i_t ≤ d`: between two chosen terms at most
/// `d − 1` terms are skipped. Terms before the first chosen one are free.
/// Order matters and repeated entries count as distinct positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GapSumSpec {
    p: Vec<u64>,
    d: usize,
}

impl GapSumSpec {
    pub fn new(p: Vec<u64>, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("gap parameter d must be at least 1".into()));
        }
        if p.contains(&0) {
            return Err(Error::InvalidArgument("sequence entries must be positive".into()));
        }
        Ok(Self { p, d })
    }

    pub fn p(&self) -> &[u64] {
        &self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn with_d(&self, d: usize) -> Result<Self> {
        Self::new(self.p.clone(), d)
    }
}

/// `SH_d(P) ∩ [1, cap]`, on the window `[1, cap + 1)`.
///
/// Frontier DP: `ending[i]` holds the sums whose last chosen index is `i`,
/// which is `{p_i}` plus `ending[i−d..i] + p_i`. Sums above `cap` are dropped
/// as they are produced; since every term is positive they can never come back
/// under the cap.
pub fn sh_d(spec: &GapSumSpec, cap: u64) -> Result<WindowedSet> {
    if cap == 0 {
        return Err(Error::InvalidArgument("cap must be at least 1".into()));
    }
    let len = cap as usize + 1;
    let mut all = BitBuf::new(len);
    let mut frontier: VecDeque<BitBuf> = VecDeque::with_capacity(spec.d + 1);
    for &p in &spec.p {
        let mut reachable = BitBuf::new(len);
        for prev in &frontier {
            reachable.or_assign(prev);
        }
        let mut ending = BitBuf::new(len);
        ending.or_shifted(&reachable, p as i64);
        if p <= cap {
            ending.set(p as usize);
        }
        all.or_assign(&ending);
        if frontier.len() == spec.d {
            frontier.pop_front();
        }
        frontier.push_back(ending);
    }
    let mut out = BitBuf::new(cap as usize);
    out.or_shifted(&all, -1);
    Ok(WindowedSet::from_bits(1, out))
}

/// Brute-force `SH_d(P) ∩ [1, cap]` by enumerating all `2^|P| − 1` index
/// subsets. Independent of [`sh_d`]; used to check it.
pub fn sh_d_oracle(spec: &GapSumSpec, cap: u64) -> Result<WindowedSet> {
    let n = spec.p.len();
    if n > ORACLE_MAX_LEN {
        return Err(Error::BoundExceeded {
            what: "|P|",
            got: n as u64,
            limit: ORACLE_MAX_LEN as u64,
        });
    }
    if cap == 0 {
        return Err(Error::InvalidArgument("cap must be at least 1".into()));
    }
    let mut out = WindowedSet::empty(1, cap as i64 + 1)?;
    for mask in 1u32..(1u32 << n) {
        let chosen: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if chosen.windows(2).any(|w| w[1] - w[0] > spec.d) {
            continue;
        }
        let sum: u64 = chosen.iter().map(|&i| spec.p[i]).sum();
        if sum <= cap {
            out.insert(sum as i64)?;
        }
    }
    Ok(out)
}

/// `max_k |s ∩ J_k| / |J_k|` over the family, exactly.
pub fn upper_density(s: &WindowedSet, fam: &IntervalFamily) -> Result<Ratio<u64>> {
    if fam.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let window = s.window();
    let mut best = Ratio::from_integer(0u64);
    for j in fam.intervals() {
        if !window.contains_interval(j) {
            return Err(Error::InvalidArgument(format!("interval {j} outside window {window}")));
        }
        let r = Ratio::new(s.count_in(j.lo, j.hi) as u64, j.len());
        if r > best {
            best = r;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Gap {
    Finite(u64),
    Infinite,
}

/// Longest stretch without members inside `range`.
///
/// Measured as the largest distance between consecutive members, also
/// counting `first − range.lo` and `(range.hi − 1) − last` at the ends.
pub fn max_gap(s: &WindowedSet, range: Interval) -> Result<Gap> {
    if !s.window().contains_interval(&range) {
        return Err(Error::InvalidArgument(format!("range {range} outside window {}", s.window())));
    }
    let mut members = s.iter().skip_while(|&n| n < range.lo).take_while(|&n| n < range.hi);
    let Some(first) = members.next() else {
        return Ok(Gap::Infinite);
    };
    let mut gap = (first - range.lo) as u64;
    let mut last = first;
    for n in members {
        gap = gap.max((n - last) as u64);
        last = n;
    }
    gap = gap.max((range.hi - 1 - last) as u64);
    Ok(Gap::Finite(gap))
}
