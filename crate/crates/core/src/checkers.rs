//! Finite surrogates for the dual classes Δ*_r, S*_r and SH_d*.
//!
//! Δ*_r and S*_r are decided exhaustively over a capped universe. SH_d* ranges
//! over infinite sequences and can only be probed: the sampled checker either
//! refutes with a concrete `P` or reports that nothing was found at the
//! given budget.
//!
//! Exhaustive scans split the lexicographic order of candidates by leading
//! element and run the blocks in parallel. The reported witness is always the
//! lexicographically earliest one, and `enumerated` counts candidates up to and
//! including it, so reports do not depend on the thread count.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dynamics::BohrTarget;
use crate::error::{Error, Result};
use crate::sets::{delta_set, sh_d, GapSumSpec};
use crate::window::{Interval, WindowedSet};

/// Largest number of candidates an exhaustive check will enumerate.
pub const ENUMERATION_BUDGET: u128 = 100_000_000;

/// Offsets for sampled differences in [`bohr0_hits_differences`] are drawn from `[0, SAMPLE_SPAN)`.
pub const SAMPLE_SPAN: i64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// Sampled check found no refutation; not a proof.
    NotRefutedAtBudget,
    Refuted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::NotRefutedAtBudget => "not-refuted-at-budget",
            Verdict::Refuted => "refuted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarReport {
    pub check: &'static str,
    pub verdict: Verdict,
    /// The refuting `S`, `E` or `P`.
    pub witness: Option<Vec<i64>>,
    pub universe: Interval,
    pub r_or_d: usize,
    pub enumerated: u64,
    pub seed: Option<u64>,
}

impl StarReport {
    pub fn holds(&self) -> bool {
        self.verdict != Verdict::Refuted
    }
}

/// `C(n, k)` without overflow for the sizes we budget.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 * 1024 {
            return u128::MAX;
        }
    }
    acc
}

/// Advances `idx` to the next `k`-combination of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for t in i + 1..k {
                idx[t] = idx[t - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// First combination (in lexicographic order) of `r` elements of `universe`
/// that fails `ok`, plus the number of candidates examined up to and including it
/// (or all of them).
fn first_failure(universe: &[i64], r: usize, ok: impl Fn(&[i64]) -> bool + Sync) -> (Option<Vec<i64>>, u64) {
    let n = universe.len();
    if r > n {
        return (None, 0);
    }
    // (first failure with its rank, combinations tried)
    type Block = (Option<(Vec<i64>, u64)>, u64);
    // block `lead` holds combinations whose smallest index is `lead`
    let blocks: Vec<Block> = (0..=n - r)
        .into_par_iter()
        .map(|lead| {
            let size = binomial((n - lead - 1) as u64, (r - 1) as u64) as u64;
            let rest = n - lead - 1;
            let mut tail: Vec<usize> = (0..r - 1).collect();
            let mut buf = vec![0i64; r];
            let mut count = 0u64;
            loop {
                buf[0] = universe[lead];
                for (slot, &t) in buf[1..].iter_mut().zip(&tail) {
                    *slot = universe[lead + 1 + t];
                }
                count += 1;
                if !ok(&buf) {
                    return (Some((buf, count)), size);
                }
                if r == 1 || !next_combination(&mut tail, rest) {
                    return (None, size);
                }
            }
        })
        .collect();
    let mut before = 0u64;
    for (hit, size) in blocks {
        if let Some((w, pos)) = hit {
            return (Some(w), before + pos);
        }
        before += size;
    }
    (None, before)
}

fn check_budget(n: u64, r: u64) -> Result<()> {
    let needed = binomial(n, r);
    if needed > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded { needed, budget: ENUMERATION_BUDGET });
    }
    Ok(())
}

/// Whether `a` meets `FS(e)`, the nonempty subset sums of `e`.
pub fn meets_sumset(a: &WindowedSet, e: &[i64]) -> bool {
    let mut sums: Vec<i64> = Vec::with_capacity(1 << e.len());
    for &x in e {
        let len = sums.len();
        if a.contains(x) {
            return true;
        }
        sums.push(x);
        for i in 0..len {
            let s = sums[i] + x;
            if a.contains(s) {
                return true;
            }
            sums.push(s);
        }
    }
    false
}

/// Whether `a` meets `Δ(s)`.
pub fn meets_delta(a: &WindowedSet, s: &[i64]) -> bool {
    s.iter()
        .enumerate()
        .any(|(i, &x)| s[i + 1..].iter().any(|&y| a.contains((y - x).abs())))
}

/// S*_r over `E ⊆ [1, m]`: every r-element `E` has `FS(E) ∩ a ≠ ∅`.
pub fn check_sumset_star(a: &WindowedSet, r: usize, m: u64) -> Result<StarReport> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    check_budget(m, r as u64)?;
    let universe: Vec<i64> = (1..=m as i64).collect();
    let (witness, enumerated) = first_failure(&universe, r, |e| meets_sumset(a, e));
    Ok(StarReport {
        check: "sumset-star",
        verdict: if witness.is_some() { Verdict::Refuted } else { Verdict::Holds },
        witness,
        universe: Interval { lo: 1, hi: m as i64 + 1 },
        r_or_d: r,
        enumerated,
        seed: None,
    })
}

/// Δ*_r over `S ⊆ [0, m]`: every r-element `S` has `Δ(S) ∩ a ≠ ∅`.
pub fn check_delta_star(a: &WindowedSet, r: usize, m: u64) -> Result<StarReport> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    check_budget(m + 1, r as u64)?;
    let universe: Vec<i64> = (0..=m as i64).collect();
    let (witness, enumerated) = first_failure(&universe, r, |s| meets_delta(a, s));
    Ok(StarReport {
        check: "delta-star",
        verdict: if witness.is_some() { Verdict::Refuted } else { Verdict::Holds },
        witness,
        universe: Interval { lo: 0, hi: m as i64 + 1 },
        r_or_d: r,
        enumerated,
        seed: None,
    })
}

/// Deterministic sequences tried before the random ones: constants, arithmetic
/// growth `(c, 2c, 3c, …)` and doubling `(c, 2c, 4c, …)`, each kept only if its
/// total fits under `cap`.
fn adversarial_family(len: usize, cap: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let per_term = cap / len as u64;
    for c in 1..=per_term.min(256) {
        out.push(vec![c; len]);
    }
    for c in 1..=per_term.min(32) {
        let arith: Vec<u64> = (1..=len as u64).map(|i| c * i).collect();
        if arith.iter().sum::<u64>() <= cap {
            out.push(arith);
        }
        let geom: Option<Vec<u64>> = (0..len as u32).map(|i| c.checked_mul(2u64.checked_pow(i)?)).collect();
        if let Some(g) = geom {
            if g.iter().try_fold(0u64, |acc, &x| acc.checked_add(x)).is_some_and(|s| s <= cap) {
                out.push(g);
            }
        }
    }
    out
}

/// Sampled SH_d* probe.
///
/// Candidates are length-`len` sequences whose total is at most `hi − 1`, so
/// all of `SH_d(P)` lies below the window top and a refutation is exact for
/// that finite `P`. The adversarial family runs first, then `trials` uniform
/// sequences with entries in `[1, (hi − 1)/len]` from ChaCha8 seeded with `seed`.
pub fn check_shd_star_sampled(a: &WindowedSet, d: usize, len: usize, trials: u64, seed: u64) -> Result<StarReport> {
    if len == 0 {
        return Err(Error::InvalidArgument("sequence length must be at least 1".into()));
    }
    let cap = (a.hi() - 1).max(1) as u64;
    let per_term = cap / len as u64;
    let universe = Interval { lo: 1, hi: cap as i64 + 1 };
    let mut report = StarReport {
        check: "shd-star-sampled",
        verdict: Verdict::NotRefutedAtBudget,
        witness: None,
        universe,
        r_or_d: d,
        enumerated: 0,
        seed: Some(seed),
    };
    if per_term == 0 {
        return Ok(report);
    }

    let misses = |p: &[u64]| -> Result<bool> {
        let sums = sh_d(&GapSumSpec::new(p.to_vec(), d)?, cap)?;
        Ok(!sums.intersects(a))
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = (0..trials).map(|_| (0..len).map(|_| rng.gen_range(1..=per_term)).collect::<Vec<u64>>());
    for p in adversarial_family(len, cap).into_iter().chain(random) {
        report.enumerated += 1;
        if misses(&p)? {
            report.verdict = Verdict::Refuted;
            report.witness = Some(p.iter().map(|&x| x as i64).collect());
            break;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassIdentityReport {
    pub m: u64,
    /// Number of 3-subsets of `[0, m]`.
    pub triples: u64,
    /// Number of 2-subsets `{x < y}` of `[1, m]` with `x + y ≤ m`.
    pub pairs: u64,
    /// Distinct sets `Δ(S)`.
    pub delta_family: usize,
    /// Distinct sets `FS(E)`.
    pub fs_family: usize,
    /// Triples checked against `Δ({a,b,c}) = FS({b−a, c−b})`.
    pub mapping_checked: u64,
    pub mapping_failures: u64,
    /// Every `FS(E)` occurs as some `Δ(S)`.
    pub fs_within_delta: bool,
    /// Every `Δ(S)` occurs as some `FS(E)`.
    pub delta_within_fs: bool,
    /// Smallest `S` (lexicographic) whose `Δ(S)` is no `FS(E)`.
    pub delta_only_witness: Option<[i64; 3]>,
    /// How many of the delta-only sets come from equally spaced triples.
    pub delta_only_equal_gaps: usize,
    pub delta_only_total: usize,
}

impl ClassIdentityReport {
    pub fn identical(&self) -> bool {
        self.fs_within_delta && self.delta_within_fs && self.mapping_failures == 0
    }
}

/// Compares `{Δ(S) : S ⊆ [0, m], |S| = 3}` with `{FS(E) : E ⊆ [1, m], |E| = 2, ΣE ≤ m}`.
///
/// The sum bound keeps every `FS(E)` inside `[1, m]`, matching the range of
/// the differences, so no truncation is needed on either side. For each
/// triple `a < b < c` with `b − a ≠ c − b` the map `Δ({a,b,c}) = FS({b−a, c−b})`
/// is checked directly.
pub fn class_identity_delta3_fs2(m: u64) -> Result<ClassIdentityReport> {
    if m > 200 {
        return Err(Error::BoundExceeded { what: "m", got: m, limit: 200 });
    }
    let m = m as i64;
    let mut delta_family: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut first_by_set: Vec<(Vec<i64>, [i64; 3])> = Vec::new();
    let (mut triples, mut mapping_checked, mut mapping_failures) = (0u64, 0u64, 0u64);
    for a in 0..=m {
        for b in a + 1..=m {
            for c in b + 1..=m {
                triples += 1;
                let mut d = vec![b - a, c - b, c - a];
                d.sort_unstable();
                d.dedup();
                if b - a != c - b {
                    mapping_checked += 1;
                    let mut fs = vec![b - a, c - b, c - a];
                    fs.sort_unstable();
                    if fs != d {
                        mapping_failures += 1;
                    }
                }
                if delta_family.insert(d.clone()) {
                    first_by_set.push((d, [a, b, c]));
                }
            }
        }
    }

    let mut fs_family: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut pairs = 0u64;
    for x in 1..=m {
        for y in x + 1..=m - x {
            pairs += 1;
            let mut fs = vec![x, y, x + y];
            fs.sort_unstable();
            fs_family.insert(fs);
        }
    }

    let delta_only: Vec<&(Vec<i64>, [i64; 3])> = first_by_set.iter().filter(|(d, _)| !fs_family.contains(d)).collect();
    let delta_only_witness = delta_only.iter().map(|(_, s)| *s).min();
    let delta_only_equal_gaps = delta_only.iter().filter(|(_, [a, b, c])| b - a == c - b).count();

    Ok(ClassIdentityReport {
        m: m as u64,
        triples,
        pairs,
        delta_family: delta_family.len(),
        fs_family: fs_family.len(),
        mapping_checked,
        mapping_failures,
        fs_within_delta: fs_family.is_subset(&delta_family),
        delta_within_fs: delta_only.is_empty(),
        delta_only_witness,
        delta_only_equal_gaps,
        delta_only_total: delta_only.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PigeonholeReport {
    pub trials: u64,
    pub hits: u64,
    pub count: usize,
    /// Smallest admissible count `⌈1/ρ_min⌉^m + 1`.
    pub bound: u128,
    pub seed: u64,
    /// First sampled `S` whose differences miss the Bohr set, if any.
    pub failure: Option<Vec<i64>>,
}

impl PigeonholeReport {
    pub fn all_hold(&self) -> bool {
        self.hits == self.trials
    }
}

/// `⌈1/ρ⌉^m + 1`.
pub fn pigeonhole_bound(t: &BohrTarget) -> u128 {
    let inv = BigRational::one() / t.min_radius();
    let cells = inv.ceil().to_integer();
    let cells = cells.to_u128().unwrap_or(u128::MAX);
    cells.saturating_pow(t.dim() as u32).saturating_add(1)
}

/// Samples `trials` sets of `count` distinct integers in `[0, SAMPLE_SPAN)` and
/// checks that each difference set meets the Bohr_0 set of `t`.
pub fn bohr0_hits_differences(t: &BohrTarget, count: usize, trials: u64, seed: u64) -> Result<PigeonholeReport> {
    if !t.is_bohr0() {
        return Err(Error::PreconditionViolated("target arcs must be centred at 0".into()));
    }
    let bound = pigeonhole_bound(t);
    if (count as u128) < bound {
        return Err(Error::PreconditionViolated(format!(
            "count {count} below the pigeonhole bound {bound}"
        )));
    }
    if count as i64 > SAMPLE_SPAN {
        return Err(Error::PreconditionViolated(format!("count {count} exceeds the sampling span")));
    }
    let probe = t.probe();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = PigeonholeReport { trials, hits: 0, count, bound, seed, failure: None };
    for _ in 0..trials {
        let mut s = BTreeSet::new();
        while s.len() < count {
            s.insert(rng.gen_range(0..SAMPLE_SPAN));
        }
        let set = WindowedSet::from_members(0, SAMPLE_SPAN, s.iter().copied())?;
        let hit = delta_set(&set).iter().any(|n| probe.contains(n));
        if hit {
            report.hits += 1;
        } else if report.failure.is_none() {
            report.failure = Some(s.into_iter().collect());
        }
    }
    Ok(report)
}
