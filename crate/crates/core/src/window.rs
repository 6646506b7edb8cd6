//! Finite truncations of integer sets.
//!
//! A [`WindowedSet`] stands for `A ∩ [lo, hi)` of some `A ⊆ ℤ`. Everything
//! outside the window is treated as absent, so every generator in this crate
//! documents its output as "the infinite object intersected with the window".

use std::fmt;

use crate::bits::BitBuf;
use crate::error::{Error, Result};

/// Half-open integer interval `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: i64,
    pub hi: i64,
}

impl Interval {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn len(&self) -> u64 {
        (self.hi - self.lo) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n < self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        other.is_empty() || (self.lo <= other.lo && other.hi <= self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", self.lo, self.hi)
    }
}

/// A finite list of nonempty intervals `J_k`, used both as a density probe
/// and as the interval sequence of the strongly-piecewise test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalFamily {
    intervals: Vec<Interval>,
}

impl IntervalFamily {
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        if let Some(bad) = intervals.iter().find(|i| i.is_empty()) {
            return Err(Error::InvalidArgument(format!("empty interval {bad} in family")));
        }
        Ok(Self { intervals })
    }

    /// Back-to-back intervals from `start` with lengths `first_len`, `first_len + step`, ….
    pub fn growing(start: i64, first_len: u64, step: u64, count: usize) -> Result<Self> {
        let mut out = Vec::with_capacity(count);
        let mut lo = start;
        for k in 0..count as u64 {
            let len = (first_len + k * step) as i64;
            out.push(Interval::new(lo, lo + len)?);
            lo += len;
        }
        Self::new(out)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn lengths_nondecreasing(&self) -> bool {
        self.intervals.windows(2).all(|w| w[0].len() <= w[1].len())
    }
}

/// Bitmap-backed set of integers restricted to `[lo, hi)`.
///
/// Bit `k` records membership of `lo + k`. Two sets compare equal only when
/// both their windows and their members agree; use [`WindowedSet::same_members`]
/// to ignore the window.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WindowedSet {
    lo: i64,
    hi: i64,
    bits: BitBuf,
}

impl WindowedSet {
    pub fn empty(lo: i64, hi: i64) -> Result<Self> {
        let w = Interval::new(lo, hi)?;
        Ok(Self {
            lo,
            hi,
            bits: BitBuf::new(w.len() as usize),
        })
    }

    pub fn full(lo: i64, hi: i64) -> Result<Self> {
        let w = Interval::new(lo, hi)?;
        Ok(Self {
            lo,
            hi,
            bits: BitBuf::full(w.len() as usize),
        })
    }

    pub fn from_predicate(lo: i64, hi: i64, mut pred: impl FnMut(i64) -> bool) -> Result<Self> {
        let mut s = Self::empty(lo, hi)?;
        for n in lo..hi {
            if pred(n) {
                s.bits.set((n - lo) as usize);
            }
        }
        Ok(s)
    }

    /// Builds a set from members, all of which must lie in the window.
    pub fn from_members(lo: i64, hi: i64, members: impl IntoIterator<Item = i64>) -> Result<Self> {
        let mut s = Self::empty(lo, hi)?;
        for n in members {
            s.insert(n)?;
        }
        Ok(s)
    }

    /// Builds `members ∩ [lo, hi)`, silently discarding anything outside.
    pub fn clipped(lo: i64, hi: i64, members: impl IntoIterator<Item = i64>) -> Result<Self> {
        let mut s = Self::empty(lo, hi)?;
        for n in members {
            if s.in_window(n) {
                s.bits.set((n - lo) as usize);
            }
        }
        Ok(s)
    }

    pub(crate) fn from_bits(lo: i64, bits: BitBuf) -> Self {
        let hi = lo + bits.len() as i64;
        Self { lo, hi, bits }
    }

    pub(crate) fn bits(&self) -> &BitBuf {
        &self.bits
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn window(&self) -> Interval {
        Interval { lo: self.lo, hi: self.hi }
    }

    /// Window width `hi − lo`.
    pub fn width(&self) -> u64 {
        (self.hi - self.lo) as u64
    }

    #[inline]
    pub fn in_window(&self, n: i64) -> bool {
        self.lo <= n && n < self.hi
    }

    #[inline]
    pub fn contains(&self, n: i64) -> bool {
        self.in_window(n) && self.bits.get((n - self.lo) as usize)
    }

    /// Inserts `n`; returns whether it was newly added.
    pub fn insert(&mut self, n: i64) -> Result<bool> {
        if !self.in_window(n) {
            return Err(Error::OutOfWindow { value: n, lo: self.lo, hi: self.hi });
        }
        let k = (n - self.lo) as usize;
        let fresh = !self.bits.get(k);
        self.bits.set(k);
        Ok(fresh)
    }

    pub fn remove(&mut self, n: i64) -> bool {
        if !self.contains(n) {
            return false;
        }
        self.bits.clear((n - self.lo) as usize);
        true
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.any()
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        let lo = self.lo;
        self.bits.ones().map(move |k| lo + k as i64)
    }

    pub fn min(&self) -> Option<i64> {
        self.bits.next_one(0).map(|k| self.lo + k as i64)
    }

    pub fn max(&self) -> Option<i64> {
        self.bits.prev_one(self.bits.len()).map(|k| self.lo + k as i64)
    }

    /// Smallest member `>= n`.
    pub fn next_at_or_after(&self, n: i64) -> Option<i64> {
        if n >= self.hi {
            return None;
        }
        let from = (n.max(self.lo) - self.lo) as usize;
        self.bits.next_one(from).map(|k| self.lo + k as i64)
    }

    /// Number of members in `[a, b)`.
    pub fn count_in(&self, a: i64, b: i64) -> usize {
        let a = a.max(self.lo);
        let b = b.min(self.hi);
        if a >= b {
            return 0;
        }
        self.bits.count_range((a - self.lo) as usize, (b - self.lo) as usize)
    }

    /// Same members, ignoring the windows.
    pub fn same_members(&self, other: &WindowedSet) -> bool {
        self.len() == other.len() && self.iter().all(|n| other.contains(n))
    }

    /// Every member of `self` is a member of `other`.
    pub fn is_subset(&self, other: &WindowedSet) -> bool {
        self.iter().all(|n| other.contains(n))
    }

    /// Smallest member of `self` that is also in `other`.
    pub fn first_common(&self, other: &WindowedSet) -> Option<i64> {
        self.iter().find(|&n| other.contains(n))
    }

    pub fn intersects(&self, other: &WindowedSet) -> bool {
        self.first_common(other).is_some()
    }

    /// Re-windows to `[lo, hi)`, dropping members that fall outside.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<WindowedSet> {
        let mut out = Self::empty(lo, hi)?;
        out.bits.or_shifted(&self.bits, self.lo - lo);
        Ok(out)
    }

    /// `{n ∈ window : n + q ∈ self}`, i.e. the translate `self − q` on the same window.
    pub fn translate_down(&self, q: i64) -> WindowedSet {
        let mut bits = BitBuf::new(self.bits.len());
        bits.or_shifted(&self.bits, -q);
        Self::from_bits(self.lo, bits)
    }

    /// Member-wise intersection; both sets must share a window.
    pub fn intersect_assign(&mut self, other: &WindowedSet) -> Result<()> {
        self.check_same_window(other)?;
        self.bits.and_assign(&other.bits);
        Ok(())
    }

    /// Member-wise union; both sets must share a window.
    pub fn union_assign(&mut self, other: &WindowedSet) -> Result<()> {
        self.check_same_window(other)?;
        self.bits.or_assign(&other.bits);
        Ok(())
    }

    /// Window-relative complement.
    pub fn complement(&self) -> WindowedSet {
        let mut bits = BitBuf::full(self.bits.len());
        for k in self.bits.ones() {
            bits.clear(k);
        }
        Self::from_bits(self.lo, bits)
    }

    fn check_same_window(&self, other: &WindowedSet) -> Result<()> {
        if self.lo != other.lo || self.hi != other.hi {
            return Err(Error::InvalidArgument(format!(
                "window mismatch: {} vs {}",
                self.window(),
                other.window()
            )));
        }
        Ok(())
    }

    /// Maximal runs of consecutive members as inclusive `(first, last)` pairs.
    pub fn runs(&self) -> Vec<(i64, i64)> {
        let mut out: Vec<(i64, i64)> = Vec::new();
        for n in self.iter() {
            match out.last_mut() {
                Some((_, last)) if *last + 1 == n => *last = n,
                _ => out.push((n, n)),
            }
        }
        out
    }
}

impl fmt::Debug for WindowedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WindowedSet{} ", self.window())?;
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_must_be_ordered() {
        assert!(WindowedSet::empty(5, 4).is_err());
        assert!(WindowedSet::empty(4, 4).unwrap().is_empty());
    }

    #[test]
    fn insert_outside_window_fails() {
        let mut s = WindowedSet::empty(-3, 3).unwrap();
        assert!(s.insert(-3).unwrap());
        assert!(!s.insert(-3).unwrap());
        assert!(matches!(s.insert(3), Err(Error::OutOfWindow { value: 3, .. })));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![-3]);
    }

    #[test]
    fn cardinality_is_popcount() {
        let s = WindowedSet::from_predicate(-50, 150, |n| n % 3 == 0).unwrap();
        assert_eq!(s.len(), s.iter().count());
        assert_eq!(s.min(), Some(-48));
        assert_eq!(s.max(), Some(147));
        assert!(s.iter().all(|n| s.in_window(n)));
    }

    #[test]
    fn translate_down_is_preimage_of_shift() {
        let b = WindowedSet::from_predicate(0, 100, |n| n % 5 == 0).unwrap();
        let t = b.translate_down(10);
        for n in 0..100 {
            assert_eq!(t.contains(n), b.contains(n + 10), "{n}");
        }
        let t = b.translate_down(-3);
        for n in 0..100 {
            assert_eq!(t.contains(n), b.contains(n - 3), "{n}");
        }
    }

    #[test]
    fn restrict_and_runs() {
        let s = WindowedSet::from_members(0, 20, [1, 2, 3, 7, 9, 10]).unwrap();
        assert_eq!(s.runs(), vec![(1, 3), (7, 7), (9, 10)]);
        let r = s.restrict(2, 10).unwrap();
        assert_eq!(r.iter().collect::<Vec<_>>(), vec![2, 3, 7, 9]);
        assert_eq!(s.count_in(2, 10), 4);
        assert_eq!(s.next_at_or_after(4), Some(7));
        assert_eq!(s.next_at_or_after(-100), Some(1));
    }

    #[test]
    fn interval_family_rejects_empty_members() {
        assert!(IntervalFamily::new(vec![Interval { lo: 3, hi: 3 }]).is_err());
        let fam = IntervalFamily::growing(0, 10, 5, 4).unwrap();
        assert!(fam.lengths_nondecreasing());
        assert_eq!(fam.intervals()[3], Interval { lo: 45, hi: 70 });
    }
}
