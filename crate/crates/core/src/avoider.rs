//! Greedy construction of a sequence `P` with `SH_d(P) ⊆ B`.
//!
//! State after `j` steps: the chosen `p_1..p_j`, the offset sets
//! `E_0 = {0}` and `E_j = {0} ∪ (E_{j−1} + p_j) ∪ … ∪ (E_{j−min(j,d)} + p_{j−min(j,d)+1})`,
//! and `B_j = ⋂_{q ∈ E_j} (B − q)`. The next term must be a positive element of
//! `B_j`; that is exactly the condition `E_j + p_{j+1} ⊆ B`. The union over `j`
//! of `E_{j−1} + p_j` is `SH_d(p_1..p_j)`, so a run that never gets stuck
//! produces a sequence whose gap sums all land in `B`.
//!
//! Everything lives on the window of `B`. Since each `E_{j−1} + p_j ⊆ B`, the
//! sets `E_j` never leave the window either.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sets::{sh_d, sh_d_oracle, GapSumSpec, ORACLE_MAX_LEN};
use crate::window::WindowedSet;

/// How the next term is picked among the positive elements of `B_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoicePolicy {
    Smallest,
    /// Smallest element strictly greater than the threshold.
    SmallestAbove(u64),
    /// Uniform among the candidates, drawn from ChaCha8 seeded with `seed`
    /// on stream `j` (the index of the term being chosen).
    Random { seed: u64 },
}

/// The recursion cannot continue: `B_{step−1}` has no positive element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stuck {
    /// Index `j` of the term that could not be chosen.
    pub step: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvoiderState {
    d: usize,
    b: WindowedSet,
    p: Vec<u64>,
    // e_history[j] = E_j
    e_history: Vec<BTreeSet<i64>>,
    bj: WindowedSet,
}

impl AvoiderState {
    pub fn new(b: WindowedSet, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("gap parameter d must be at least 1".into()));
        }
        Ok(Self {
            d,
            bj: b.clone(),
            b,
            p: Vec::new(),
            e_history: vec![BTreeSet::from([0])],
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn target(&self) -> &WindowedSet {
        &self.b
    }

    pub fn p(&self) -> &[u64] {
        &self.p
    }

    /// Number of terms chosen so far.
    pub fn j(&self) -> usize {
        self.p.len()
    }

    /// Current `E_j`.
    pub fn e(&self) -> &BTreeSet<i64> {
        self.e_history.last().expect("E_0 always present")
    }

    /// `E_i` for `i ≤ j`.
    pub fn e_at(&self, i: usize) -> Option<&BTreeSet<i64>> {
        self.e_history.get(i)
    }

    /// Current `B_j`.
    pub fn bj(&self) -> &WindowedSet {
        &self.bj
    }

    fn choose(&self, policy: ChoicePolicy) -> Option<u64> {
        match policy {
            ChoicePolicy::Smallest => self.bj.next_at_or_after(1),
            ChoicePolicy::SmallestAbove(t) => {
                let from = i64::try_from(t).ok()?.checked_add(1)?.max(1);
                self.bj.next_at_or_after(from)
            }
            ChoicePolicy::Random { seed } => {
                let candidates: Vec<i64> = self.bj.iter().filter(|&n| n >= 1).collect();
                if candidates.is_empty() {
                    return None;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(self.j() as u64 + 1);
                Some(candidates[rng.gen_range(0..candidates.len())])
            }
        }
        .map(|n| n as u64)
    }

    /// Picks `p_{j+1} ∈ B_j` and advances `E` and `B_j`.
    pub fn step(&self, policy: ChoicePolicy) -> std::result::Result<AvoiderState, Stuck> {
        let next = self.j() + 1;
        let p = self.choose(policy).ok_or(Stuck { step: next })?;

        let mut p_seq = self.p.clone();
        p_seq.push(p);

        // E_next = {0} ∪ ⋃_{i=1..min(next,d)} (E_{next−i} + p_{next−i+1})
        let mut e = BTreeSet::from([0i64]);
        for i in 1..=next.min(self.d) {
            let shift = p_seq[next - i] as i64;
            e.extend(self.e_history[next - i].iter().map(|&q| q + shift));
        }

        let mut bj = self.b.clone();
        for &q in &e {
            if q != 0 {
                bj.intersect_assign(&self.b.translate_down(q)).expect("same window");
            }
        }

        debug_assert!(self.e().iter().all(|&q| self.b.contains(q + p as i64)));

        let mut e_history = self.e_history.clone();
        e_history.push(e);
        Ok(AvoiderState {
            d: self.d,
            b: self.b.clone(),
            p: p_seq,
            e_history,
            bj,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvoiderReport {
    pub d: usize,
    pub steps: usize,
    /// `"oracle"` for short sequences, `"dp"` otherwise.
    pub method: &'static str,
    /// `|SH_d(P) ∩ window|`.
    pub sums_checked: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AvoiderOutcome {
    Success { p: Vec<u64>, report: AvoiderReport },
    Stuck { step: usize, p: Vec<u64> },
}

/// Runs `steps` rounds of the recursion and then re-checks `SH_d(P) ∩ window ⊆ B`
/// independently of the recursion.
pub fn avoider_run(b: &WindowedSet, d: usize, steps: usize, policy: ChoicePolicy) -> Result<AvoiderOutcome> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    let mut state = AvoiderState::new(b.clone(), d)?;
    for _ in 0..steps {
        state = match state.step(policy) {
            Ok(s) => s,
            Err(Stuck { step }) => return Ok(AvoiderOutcome::Stuck { step, p: state.p }),
        };
    }
    let p = state.p;
    let report = verify_gap_sums(b, &p, d)?;
    if !report.passed {
        return Err(Error::VerificationFailed(format!(
            "SH_{d}({p:?}) leaves the target set"
        )));
    }
    Ok(AvoiderOutcome::Success { p, report })
}

/// Checks `SH_d(P) ∩ [1, hi − 1] ⊆ b`, by brute force when `|P|` allows it.
pub fn verify_gap_sums(b: &WindowedSet, p: &[u64], d: usize) -> Result<AvoiderReport> {
    let spec = GapSumSpec::new(p.to_vec(), d)?;
    let cap = (b.hi() - 1).max(1) as u64;
    let (sums, method) = if p.len() <= ORACLE_MAX_LEN {
        (sh_d_oracle(&spec, cap)?, "oracle")
    } else {
        (sh_d(&spec, cap)?, "dp")
    };
    Ok(AvoiderReport {
        d,
        steps: p.len(),
        method,
        sums_checked: sums.len(),
        passed: sums.is_subset(b),
    })
}
