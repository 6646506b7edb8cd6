//! A set `S` whose difference set misses the quadratic return-time set
//! `Ω = {n : ‖n²α‖ < ρ}`, so `Ω` is a Nil_2-Bohr_0 set that is not Δ*.
//!
//! The search picks `n_1 < n_2 < …` greedily with `‖n_j²α − c‖ < ε` and
//! `‖n_i n_j α‖ < ε` for `i < j`. Then
//! `(n_j − n_i)²α = n_j²α + n_i²α − 2 n_i n_j α` lies within `4ε` of `2c`,
//! hence at distance more than `‖2c‖ − 4ε` from 0.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::dynamics::{poly_return_set, PolyTarget};
use crate::error::{Error, Result};
use crate::sets::delta_set;
use crate::torus::{torus_distance, ArcProbe, TorusAngle};
use crate::window::{Interval, WindowedSet};

const SCAN_BLOCK: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleSpec {
    pub alpha: TorusAngle,
    pub epsilon: BigRational,
    pub target_count: usize,
    pub search_bound: u64,
    /// Where the squares should land; 1/3 unless configured.
    pub target: TorusAngle,
}

impl CounterexampleSpec {
    pub fn new(alpha: TorusAngle, epsilon: BigRational, target_count: usize, search_bound: u64) -> Result<Self> {
        let half = BigRational::new(1.into(), 2.into());
        if epsilon <= BigRational::zero() || epsilon > half {
            return Err(Error::InvalidArgument(format!("epsilon {epsilon} not in (0, 1/2]")));
        }
        if target_count == 0 {
            return Err(Error::InvalidArgument("target_count must be at least 1".into()));
        }
        if search_bound < target_count as u64 {
            return Err(Error::InvalidArgument(format!(
                "search_bound {search_bound} below target_count {target_count}"
            )));
        }
        Ok(Self {
            alpha,
            epsilon,
            target_count,
            search_bound,
            target: TorusAngle::new(1, 3)?,
        })
    }

    pub fn with_target(mut self, target: TorusAngle) -> Self {
        self.target = target;
        self
    }

    /// Whether `radius + 4ε < ‖2c‖`, which makes an empty intersection a theorem.
    pub fn guarantees_radius(&self, radius: &BigRational) -> bool {
        let two_c = self.target.add(&self.target);
        let margin = torus_distance(&two_c, &TorusAngle::zero());
        radius + &self.epsilon * BigRational::from_integer(4.into()) < margin
    }
}

/// The search ran out of candidates; `found` holds the prefix it did build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotFound {
    pub found: Vec<u64>,
}

/// Greedy scan over `1..=search_bound`; each new element is the smallest
/// qualifying integer above the previous one. Blocks are scanned in parallel
/// with smallest-index tie-breaking.
pub fn counterexample_search(spec: &CounterexampleSpec) -> std::result::Result<WindowedSet, NotFound> {
    let found = search_sequence(spec)?;
    let top = *found.last().expect("target_count >= 1") as i64;
    Ok(WindowedSet::from_members(1, top + 1, found.iter().map(|&n| n as i64)).expect("members in window"))
}

/// Same search, returning the elements in the order they were chosen.
pub fn search_sequence(spec: &CounterexampleSpec) -> std::result::Result<Vec<u64>, NotFound> {
    let square = ArcProbe::new(&spec.alpha, &spec.target, &spec.epsilon);
    let cross = ArcProbe::new(&spec.alpha, &TorusAngle::zero(), &spec.epsilon);
    let mut found: Vec<u64> = Vec::with_capacity(spec.target_count);

    let qualifies = |n: u64, prior: &[u64]| -> bool {
        let nb = BigInt::from(n);
        square.hits(&(&nb * &nb)) && prior.iter().all(|&m| cross.hits(&(&nb * BigInt::from(m))))
    };

    let mut next = 1u64;
    while found.len() < spec.target_count {
        let mut hit = None;
        while next <= spec.search_bound {
            let end = (next + SCAN_BLOCK).min(spec.search_bound + 1);
            let prior = &found;
            hit = (next..end).into_par_iter().find_first(|&n| qualifies(n, prior));
            if hit.is_some() {
                break;
            }
            next = end;
        }
        match hit {
            Some(n) => {
                found.push(n);
                next = n + 1;
            }
            None => return Err(NotFound { found }),
        }
    }
    Ok(found)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleReport {
    /// Window on which Δ(S) and Ω were compared.
    pub window: Interval,
    pub delta_size: usize,
    pub omega_size: usize,
    /// `(a, b, b − a)` with `b − a ∈ Ω`, smallest difference first.
    pub witness: Option<(i64, i64, i64)>,
}

impl CounterexampleReport {
    pub fn is_empty_intersection(&self) -> bool {
        self.witness.is_none()
    }
}

/// Compares `Δ(S)` with `Ω = poly_return_set(t)` on the window of `Δ(S)`.
pub fn counterexample_verify(s: &WindowedSet, t: &PolyTarget) -> Result<CounterexampleReport> {
    let delta = delta_set(s);
    let window = delta.window();
    let omega = poly_return_set(t, window)?;
    let witness = delta.first_common(&omega).map(|diff| {
        let (a, b) = s
            .iter()
            .find_map(|a| s.contains(a + diff).then_some((a, a + diff)))
            .expect("diff is a difference of members");
        (a, b, diff)
    });
    Ok(CounterexampleReport {
        window,
        delta_size: delta.len(),
        omega_size: omega.len(),
        witness,
    })
}
