//! Return-time sets of rotations and of the skew product `(x, y) ↦ (x + α, y + x)`.
//!
//! All orbit arithmetic is exact. Window sweeps run in parallel over fixed-size
//! chunks and are reassembled in order, so the output never depends on the
//! thread count.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::torus::{ArcProbe, TorusAngle};
use crate::window::{Interval, WindowedSet};

const SWEEP_CHUNK: i64 = 4096;

fn check_radius(r: &BigRational) -> Result<()> {
    let half = BigRational::new(1.into(), 2.into());
    if *r <= BigRational::zero() || *r > half {
        return Err(Error::InvalidArgument(format!("radius {r} not in (0, 1/2]")));
    }
    Ok(())
}

/// Open arc `{x ∈ T : ‖x − center‖ < radius}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub center: TorusAngle,
    pub radius: BigRational,
}

impl Arc {
    pub fn new(center: TorusAngle, radius: BigRational) -> Result<Self> {
        check_radius(&radius)?;
        Ok(Self { center, radius })
    }

    pub fn around_zero(radius: BigRational) -> Result<Self> {
        Self::new(TorusAngle::zero(), radius)
    }
}

/// A rotation `α ∈ T^m` and a product of arcs `U ⊂ T^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BohrTarget {
    coords: Vec<(TorusAngle, Arc)>,
}

impl BohrTarget {
    pub fn new(coords: Vec<(TorusAngle, Arc)>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("a Bohr target needs at least one coordinate".into()));
        }
        Ok(Self { coords })
    }

    /// All arcs centred at 0 with the given radii.
    pub fn bohr0(angles: Vec<TorusAngle>, radii: Vec<BigRational>) -> Result<Self> {
        if angles.len() != radii.len() {
            return Err(Error::InvalidArgument(format!(
                "{} angles but {} radii",
                angles.len(),
                radii.len()
            )));
        }
        let coords = angles
            .into_iter()
            .zip(radii)
            .map(|(a, r)| Ok((a, Arc::around_zero(r)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[(TorusAngle, Arc)] {
        &self.coords
    }

    pub fn is_bohr0(&self) -> bool {
        self.coords.iter().all(|(_, arc)| arc.center.is_zero())
    }

    pub fn min_radius(&self) -> &BigRational {
        self.coords.iter().map(|(_, arc)| &arc.radius).min().expect("nonempty")
    }

    /// Same angles and centres, new radii.
    pub fn with_radii(&self, radii: &[BigRational]) -> Result<Self> {
        if radii.len() != self.dim() {
            return Err(Error::InvalidArgument("radius count does not match dimension".into()));
        }
        let coords = self
            .coords
            .iter()
            .zip(radii)
            .map(|((a, arc), r)| Ok((a.clone(), Arc::new(arc.center.clone(), r.clone())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coords)
    }

    /// Compiled form for repeated membership queries.
    pub fn probe(&self) -> BohrProbe {
        BohrProbe {
            probes: self
                .coords
                .iter()
                .map(|(a, arc)| ArcProbe::new(a, &arc.center, &arc.radius))
                .collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BohrProbe {
    probes: Vec<ArcProbe>,
}

impl BohrProbe {
    /// `n·α ∈ U`.
    pub fn contains(&self, n: i64) -> bool {
        let n = BigInt::from(n);
        self.probes.iter().all(|p| p.hits(&n))
    }
}

fn sweep(window: Interval, pred: impl Fn(i64) -> bool + Sync) -> Result<WindowedSet> {
    let starts: Vec<i64> = (window.lo..window.hi).step_by(SWEEP_CHUNK as usize).collect();
    let chunks: Vec<Vec<i64>> = starts
        .par_iter()
        .map(|&a| {
            let b = (a + SWEEP_CHUNK).min(window.hi);
            (a..b).filter(|&n| pred(n)).collect()
        })
        .collect();
    WindowedSet::from_members(window.lo, window.hi, chunks.into_iter().flatten())
}

/// `{n ∈ window : ‖n·α_i − c_i‖ < r_i for every i}`.
pub fn bohr_set(t: &BohrTarget, window: Interval) -> Result<WindowedSet> {
    let probe = t.probe();
    sweep(window, |n| probe.contains(n))
}

/// The skew product `T(x, y) = (x + α, y + x)` on `T²` with a base point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewSystem {
    pub alpha: TorusAngle,
    pub x0: TorusAngle,
    pub y0: TorusAngle,
}

impl SkewSystem {
    pub fn new(alpha: TorusAngle, x0: TorusAngle, y0: TorusAngle) -> Self {
        Self { alpha, x0, y0 }
    }

    /// One application of the map.
    pub fn step(&self, (x, y): (&TorusAngle, &TorusAngle)) -> (TorusAngle, TorusAngle) {
        (x.add(&self.alpha), y.add(x))
    }
}

/// `T^n(x0, y0) = (x0 + nα, y0 + n·x0 + C(n,2)·α)`; valid for negative `n` too.
pub fn skew_orbit(sys: &SkewSystem, n: i64) -> (TorusAngle, TorusAngle) {
    let n = BigInt::from(n);
    let binom = &n * (&n - BigInt::one()) / BigInt::from(2);
    let x = sys.x0.add(&sys.alpha.times(&n));
    let y = sys.y0.add(&sys.x0.times(&n)).add(&sys.alpha.times(&binom));
    (x, y)
}

/// `{n ∈ window : T^n(base) lies within radius of the base point in both coordinates}`.
///
/// A Nil_2-Bohr_0 set: the neighbourhood is a product of arcs around the base.
pub fn skew_return_set(sys: &SkewSystem, radius: &BigRational, window: Interval) -> Result<WindowedSet> {
    check_radius(radius)?;
    // x_n − x0 = nα, so the cheap x test runs first
    let x_probe = ArcProbe::new(&sys.alpha, &TorusAngle::zero(), radius);
    sweep(window, |n| {
        if !x_probe.hits(&BigInt::from(n)) {
            return false;
        }
        let (_, y) = skew_orbit(sys, n);
        crate::torus::torus_distance(&y, &sys.y0) < *radius
    })
}

/// Quadratic return times `{n : ‖q(n)·α‖ < radius}` with `q(n) = c2·n² + c1·n + c0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyTarget {
    pub alpha: TorusAngle,
    pub coeffs: (i64, i64, i64),
    pub radius: BigRational,
}

impl PolyTarget {
    pub fn new(alpha: TorusAngle, coeffs: (i64, i64, i64), radius: BigRational) -> Result<Self> {
        check_radius(&radius)?;
        Ok(Self { alpha, coeffs, radius })
    }

    /// `q(n) = n²`.
    pub fn squares(alpha: TorusAngle, radius: BigRational) -> Result<Self> {
        Self::new(alpha, (1, 0, 0), radius)
    }

    pub fn eval(&self, n: i64) -> BigInt {
        let (c2, c1, c0) = self.coeffs;
        let n = i128::from(n);
        BigInt::from(i128::from(c2) * n * n) + BigInt::from(i128::from(c1) * n + i128::from(c0))
    }
}

pub fn poly_return_set(t: &PolyTarget, window: Interval) -> Result<WindowedSet> {
    let probe = ArcProbe::new(&t.alpha, &TorusAngle::zero(), &t.radius);
    sweep(window, |n| probe.hits(&t.eval(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::torus_distance;

    fn ang(s: &str) -> TorusAngle {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn w(lo: i64, hi: i64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn bohr_examples() {
        let t = BohrTarget::bohr0(vec![ang("0")], vec![q(1, 10)]).unwrap();
        assert_eq!(bohr_set(&t, w(-20, 50)).unwrap().len(), 70);

        let t = BohrTarget::bohr0(vec![ang("1/2")], vec![q(1, 4)]).unwrap();
        let s = bohr_set(&t, w(-10, 100)).unwrap();
        assert!(s.iter().all(|n| n % 2 == 0));
        assert_eq!(s.len(), 55);

        let t = BohrTarget::bohr0(vec![ang("1/4")], vec![q(1, 8)]).unwrap();
        let s = bohr_set(&t, w(0, 100)).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), (0..100).step_by(4).collect::<Vec<_>>());
    }

    #[test]
    fn bohr_off_centre_and_multi_dim() {
        let t = BohrTarget::new(vec![
            (ang("1/5"), Arc::new(ang("2/5"), q(1, 10)).unwrap()),
            (ang("1/2"), Arc::around_zero(q(1, 4)).unwrap()),
        ])
        .unwrap();
        assert!(!t.is_bohr0());
        let s = bohr_set(&t, w(0, 40)).unwrap();
        // n ≡ 2 (mod 5) and n even
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![2, 12, 22, 32]);
    }

    #[test]
    fn radius_validation() {
        assert!(Arc::around_zero(q(0, 1)).is_err());
        assert!(Arc::around_zero(q(3, 5)).is_err());
        assert!(Arc::around_zero(q(1, 2)).is_ok());
        assert!(BohrTarget::new(vec![]).is_err());
        assert!(BohrTarget::bohr0(vec![ang("0")], vec![]).is_err());
    }

    #[test]
    fn skew_examples() {
        let alpha = ang("cf:sqrt2:30");
        let sys = SkewSystem::new(alpha.clone(), ang("2/7"), ang("5/11"));
        assert_eq!(skew_orbit(&sys, 0), (sys.x0.clone(), sys.y0.clone()));
        assert_eq!(skew_orbit(&sys, 1), (sys.x0.add(&alpha), sys.y0.add(&sys.x0)));

        let origin = SkewSystem::new(alpha.clone(), TorusAngle::zero(), TorusAngle::zero());
        let five = skew_orbit(&origin, 5);
        assert_eq!(five, (alpha.times(&5.into()), alpha.times(&10.into())));
    }

    #[test]
    fn skew_negative_times_invert() {
        let sys = SkewSystem::new(ang("3/17"), ang("1/5"), ang("4/9"));
        for n in -30..30 {
            let fwd = skew_orbit(&sys, n);
            let next = sys.step((&fwd.0, &fwd.1));
            assert_eq!(next, skew_orbit(&sys, n + 1), "n = {n}");
        }
    }

    #[test]
    fn poly_examples() {
        let t = PolyTarget::squares(ang("0"), q(1, 10)).unwrap();
        assert_eq!(poly_return_set(&t, w(0, 50)).unwrap().len(), 50);

        let t = PolyTarget::squares(ang("1/2"), q(1, 4)).unwrap();
        let s = poly_return_set(&t, w(-7, 60)).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), (-6..60).step_by(2).collect::<Vec<_>>());

        let t = PolyTarget::squares(ang("1/3"), q(1, 6)).unwrap();
        let s = poly_return_set(&t, w(0, 60)).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), (0..60).step_by(3).collect::<Vec<_>>());
    }

    #[test]
    fn linear_poly_is_bohr() {
        let alpha = ang("cf:golden:25");
        let poly = PolyTarget::new(alpha.clone(), (0, 3, 0), q(1, 9)).unwrap();
        let bohr = BohrTarget::bohr0(vec![alpha.times(&3.into())], vec![q(1, 9)]).unwrap();
        assert_eq!(poly_return_set(&poly, w(-500, 3000)).unwrap(), bohr_set(&bohr, w(-500, 3000)).unwrap());
    }

    #[test]
    fn skew_return_set_brute_force() {
        let sys = SkewSystem::new(ang("cf:e:12"), ang("1/7"), ang("2/3"));
        let r = q(1, 8);
        let s = skew_return_set(&sys, &r, w(-200, 2000)).unwrap();
        for n in -200..2000 {
            let (x, y) = skew_orbit(&sys, n);
            let expect = torus_distance(&x, &sys.x0) < r && torus_distance(&y, &sys.y0) < r;
            assert_eq!(s.contains(n), expect, "n = {n}");
        }
        assert!(s.contains(0));
    }
}
