use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use nilbohr::avoider::{AvoiderState, ChoicePolicy};
use nilbohr::checkers::{check_delta_star, check_sumset_star, meets_delta};
use nilbohr::dynamics::{bohr_set, poly_return_set, skew_orbit, BohrTarget, PolyTarget, SkewSystem};
use nilbohr::piecewise::{is_clean, pw_witness};
use nilbohr::sets::{delta_set, sh_d, sh_d_oracle, sumset, GapSumSpec};
use nilbohr::torus::TorusAngle;
use nilbohr::window::{Interval, IntervalFamily, WindowedSet};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn angle() -> impl Strategy<Value = TorusAngle> {
    (0i64..1_000_000, 1i64..1_000_000).prop_map(|(n, d)| TorusAngle::new(n, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sh_d_matches_oracle(p in prop::collection::vec(1u64..=50, 0..=12), d in 1usize..=4) {
        let spec = GapSumSpec::new(p, d).unwrap();
        prop_assert_eq!(sh_d(&spec, 600).unwrap(), sh_d_oracle(&spec, 600).unwrap());
    }

    #[test]
    fn sh_d_monotone_in_d(p in prop::collection::vec(1u64..=40, 0..=14), d in 1usize..=5, cap in 1u64..700) {
        let spec = GapSumSpec::new(p, d).unwrap();
        let narrow = sh_d(&spec, cap).unwrap();
        let wide = sh_d(&spec.with_d(d + 1).unwrap(), cap).unwrap();
        prop_assert!(narrow.is_subset(&wide));
    }

    #[test]
    fn sh_1_is_delta_of_partial_sums(p in prop::collection::vec(1u64..=30, 1..=15), start in -50i64..50) {
        let cap: u64 = p.iter().sum();
        let mut points = vec![start];
        for &x in &p {
            points.push(points.last().unwrap() + x as i64);
        }
        let s = WindowedSet::from_members(start, start + cap as i64 + 1, points).unwrap();
        let delta = delta_set(&s);
        let sh = sh_d(&GapSumSpec::new(p, 1).unwrap(), cap).unwrap();
        prop_assert!(sh.same_members(&delta));
    }

    #[test]
    fn delta_is_shift_intersection(members in prop::collection::btree_set(0i64..120, 0..25)) {
        let s = WindowedSet::from_members(0, 120, members).unwrap();
        let d = delta_set(&s);
        for n in 1..120 {
            let shifted_meets = s.iter().any(|a| s.contains(a + n));
            prop_assert_eq!(d.contains(n), shifted_meets, "n = {}", n);
        }
    }

    #[test]
    fn sumset_cardinality_bound(e in prop::collection::btree_set(1u64..60, 0..10)) {
        let fs = sumset(&e).unwrap();
        prop_assert!(fs.len() < 1usize << e.len() || e.is_empty() && fs.is_empty());
        prop_assert!(fs.len() < (1usize << e.len()));
    }

    #[test]
    fn skew_closed_form_matches_iteration(alpha in angle(), x0 in angle(), y0 in angle()) {
        let sys = SkewSystem::new(alpha, x0, y0);
        let (mut x, mut y) = (sys.x0.clone(), sys.y0.clone());
        for n in 0..=300 {
            prop_assert_eq!(skew_orbit(&sys, n), (x.clone(), y.clone()));
            (x, y) = sys.step((&x, &y));
        }
    }

    #[test]
    fn bohr_shift_coherence(alpha in angle(), r1 in 1i64..=10, r2 in 1i64..=10) {
        // radii r1/40 and r2/40, sum at most 1/2
        let t1 = BohrTarget::bohr0(vec![alpha.clone()], vec![q(r1, 40)]).unwrap();
        let t2 = t1.with_radii(&[q(r2, 40)]).unwrap();
        let t12 = t1.with_radii(&[q(r1 + r2, 40)]).unwrap();
        let w = Interval::new(-100, 100).unwrap();
        let (a, b) = (bohr_set(&t1, w).unwrap(), bohr_set(&t2, w).unwrap());
        let sum = bohr_set(&t12, Interval::new(-200, 200).unwrap()).unwrap();
        for n in a.iter() {
            for m in b.iter() {
                prop_assert!(sum.contains(n + m), "{} + {}", n, m);
            }
        }
    }

    #[test]
    fn linear_poly_reduces_to_rotation(alpha in angle(), c1 in -20i64..20, r in 1i64..=20) {
        let poly = PolyTarget::new(alpha.clone(), (0, c1, 0), q(r, 40)).unwrap();
        let bohr = BohrTarget::bohr0(vec![alpha.times(&BigInt::from(c1))], vec![q(r, 40)]).unwrap();
        let w = Interval::new(-300, 300).unwrap();
        prop_assert_eq!(poly_return_set(&poly, w).unwrap(), bohr_set(&bohr, w).unwrap());
    }

    #[test]
    fn sweeps_partition_cleanly(alpha in angle(), split in 1i64..9000) {
        let t = BohrTarget::bohr0(vec![alpha], vec![q(1, 7)]).unwrap();
        let whole = bohr_set(&t, Interval::new(0, 9000).unwrap()).unwrap();
        let mut left = bohr_set(&t, Interval::new(0, split).unwrap()).unwrap().restrict(0, 9000).unwrap();
        let right = bohr_set(&t, Interval::new(split, 9000).unwrap()).unwrap().restrict(0, 9000).unwrap();
        left.union_assign(&right).unwrap();
        prop_assert_eq!(left, whole);
    }

    #[test]
    fn pw_witness_is_maximal(
        lam in prop::collection::btree_set(0i64..200, 0..120),
        a in prop::collection::btree_set(0i64..200, 0..150),
        cut in 1i64..199,
    ) {
        let lambda = WindowedSet::from_members(0, 200, lam).unwrap();
        let a = WindowedSet::from_members(0, 200, a).unwrap();
        let fam = IntervalFamily::new(vec![Interval::new(0, cut).unwrap(), Interval::new(cut, 200).unwrap()]).unwrap();
        if let Some(w) = pw_witness(&a, &lambda, &fam, 1).unwrap() {
            for p in &w.picked {
                let j = fam.intervals()[p.k];
                prop_assert!(j.contains_interval(&p.interval));
                prop_assert!(is_clean(&a, &lambda, p.interval));
                let best = p.interval.len();
                for lo in j.lo..j.hi {
                    let hi = lo + best as i64 + 1;
                    if hi <= j.hi {
                        prop_assert!(!is_clean(&a, &lambda, Interval::new(lo, hi).unwrap()));
                    }
                }
            }
            prop_assert!(w.picked.windows(2).all(|x| x[0].interval.len() <= x[1].interval.len()));
        }
    }

    #[test]
    fn star_checks_are_monotone(a in prop::collection::btree_set(1i64..40, 0..40), extra in prop::collection::btree_set(1i64..40, 0..10)) {
        let small = WindowedSet::from_members(0, 40, a.iter().copied()).unwrap();
        let big = WindowedSet::from_members(0, 40, a.union(&extra).copied()).unwrap();
        for r in 2..=3 {
            if check_delta_star(&small, r, 12).unwrap().holds() {
                prop_assert!(check_delta_star(&big, r, 12).unwrap().holds());
            }
            if check_sumset_star(&small, r, 12).unwrap().holds() {
                prop_assert!(check_sumset_star(&big, r, 12).unwrap().holds());
            }
        }
    }

    #[test]
    fn delta3_star_implies_sumset2_star(a in prop::collection::btree_set(1i64..30, 0..30)) {
        // FS({x, y}) = Δ({0, x, x + y}); E ⊆ [1, 10] keeps x + y inside [0, 20]
        let a = WindowedSet::from_members(0, 60, a).unwrap();
        if check_delta_star(&a, 3, 20).unwrap().holds() {
            let r = check_sumset_star(&a, 2, 10).unwrap();
            prop_assert!(r.holds(), "{:?}", r.witness);
        }
    }

    #[test]
    fn refutation_witnesses_recheck(a in prop::collection::btree_set(1i64..40, 0..25)) {
        let a = WindowedSet::from_members(0, 80, a).unwrap();
        let r = check_sumset_star(&a, 2, 15).unwrap();
        if let Some(e) = r.witness {
            let fs = sumset(&e.iter().map(|&x| x as u64).collect()).unwrap();
            prop_assert!(!fs.intersects(&a));
        }
        let r = check_delta_star(&a, 3, 15).unwrap();
        if let Some(s) = r.witness {
            let d = delta_set(&WindowedSet::from_members(0, 16, s).unwrap());
            prop_assert!(!d.intersects(&a));
        }
    }
}

#[test]
fn sumset_super_increasing_is_extremal() {
    let e: BTreeSet<u64> = [1, 3, 7, 15, 40, 100].into_iter().collect();
    assert_eq!(sumset(&e).unwrap().len(), 63);
}

#[test]
fn sumset_star_does_not_imply_delta3_star() {
    // every FS({x, y}) contains x + y ≥ 3, but Δ({0, 1, 2}) = {1, 2}
    let a = WindowedSet::from_predicate(0, 100, |n| n >= 3).unwrap();
    assert!(check_sumset_star(&a, 2, 30).unwrap().holds());
    let r = check_delta_star(&a, 3, 30).unwrap();
    assert_eq!(r.witness, Some(vec![0, 1, 2]));
    assert!(!meets_delta(&a, &[0, 1, 2]));
}

/// Offset sums `ε_1 p_1 + … + ε_j p_j` whose 0/1 word, after its first 1,
/// contains no run of `d` zeros (trailing zeros included). The all-zero word
/// gives 0.
fn word_sums(p: &[u64], d: usize) -> BTreeSet<i64> {
    let j = p.len();
    let mut out = BTreeSet::from([0i64]);
    for mask in 1u32..(1 << j) {
        let first = mask.trailing_zeros() as usize;
        let mut run = 0;
        let mut ok = true;
        for i in first..j {
            if mask >> i & 1 == 1 {
                run = 0;
            } else {
                run += 1;
                if run >= d {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.insert((0..j).filter(|&i| mask >> i & 1 == 1).map(|i| p[i] as i64).sum());
        }
    }
    out
}

/// Same, but only zero runs strictly between two 1s are constrained.
fn interior_word_sums(p: &[u64], d: usize) -> BTreeSet<i64> {
    let j = p.len();
    let mut out = BTreeSet::from([0i64]);
    for mask in 1u32..(1 << j) {
        let chosen: Vec<usize> = (0..j).filter(|&i| mask >> i & 1 == 1).collect();
        if chosen.windows(2).all(|w| w[1] - w[0] <= d) {
            out.insert(chosen.iter().map(|&i| p[i] as i64).sum());
        }
    }
    out
}

fn avoider_soundness(b: &WindowedSet, d: usize, policy: ChoicePolicy, steps: usize) {
    let mut state = AvoiderState::new(b.clone(), d).unwrap();
    for _ in 0..steps {
        let prev_e = state.e().clone();
        let Ok(next) = state.step(policy) else { return };
        let p_j = *next.p().last().unwrap() as i64;
        assert!(prev_e.iter().all(|&q| b.contains(q + p_j)), "E_(j-1) + p_j ⊄ B");
        assert_eq!(next.e(), &word_sums(next.p(), d), "E_j for P = {:?}", next.p());
        assert!(next.e().is_subset(&interior_word_sums(next.p(), d)));
        assert!(next.e().contains(&0));
        // B_j by definition
        for n in b.lo()..b.hi() {
            let expect = next.e().iter().all(|&q| b.contains(n + q));
            assert_eq!(next.bj().contains(n), expect);
        }
        state = next;
    }
}

#[test]
fn avoider_offsets_follow_word_characterisation() {
    let full = WindowedSet::full(0, 3000).unwrap();
    for d in 1..=4 {
        avoider_soundness(&full, d, ChoicePolicy::SmallestAbove(10), 8);
        avoider_soundness(&full, d, ChoicePolicy::Random { seed: d as u64 }, 5);
    }
    let dense = WindowedSet::from_predicate(0, 2000, |n| n % 7 != 3 && n % 11 != 5).unwrap();
    for d in 1..=3 {
        avoider_soundness(&dense, d, ChoicePolicy::Smallest, 8);
    }
}

#[test]
fn avoider_offsets_differ_from_interior_only_words() {
    // d = 2 after three steps: 100 has a trailing run of two zeros
    let full = WindowedSet::full(0, 1000).unwrap();
    let mut s = AvoiderState::new(full, 2).unwrap();
    for _ in 0..3 {
        s = s.step(ChoicePolicy::SmallestAbove(100)).unwrap();
    }
    assert_eq!(s.p(), &[101, 101, 101]);
    let p = [1u64, 10, 100];
    assert!(!word_sums(&p, 2).contains(&1));
    assert!(interior_word_sums(&p, 2).contains(&1));
}
